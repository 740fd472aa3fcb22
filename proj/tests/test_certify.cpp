#include <doctest.h>

#include <algorithm>
#include <map>

#include "fixtures.hpp"
#include "planar/certificate_json.hpp"
#include "planar/certify.hpp"
#include "planar/parser.hpp"

using namespace planar;

namespace {

const std::vector<std::string> kCorpus = {"square_trace", "identity", "shear", "cubic", "honesty", "swap",
                                          "exp_spiral", "scaled_identity", "scaled_square_trace", "fold",
                                          "quintic"};

CheckContext ctx_of(const std::string& name) {
  const auto spec = fixture(name);
  return make_context(spec.p, spec.q);
}

std::map<std::string, Outcome> outcomes(const Report& r) {
  std::map<std::string, Outcome> m;
  for (const auto& v : r.verdicts) m[v.criterion] = v.outcome;
  return m;
}

}  // namespace

TEST_CASE("square_trace is proved by the trace bound") {
  const auto r = certify_all(fixture("square_trace"));
  CHECK(r.outcome == Outcome::proved_injective);
  REQUIRE(r.winner);
  CHECK(*r.winner == "trace_bounded");
  const auto it = std::find_if(r.verdicts.begin(), r.verdicts.end(),
                               [](const Verdict& v) { return v.criterion == "trace_bounded"; });
  REQUIRE(it != r.verdicts.end());
  CHECK(it->theorem == "Corollary 6");
  REQUIRE(it->claims.size() == 2);
  CHECK(it->claims[0].cert.kind == CertKind::constant);
  CHECK(it->claims[1].cert.kind == CertKind::perfect_square);
  CHECK(it->claims[1].cert.squares == std::vector<BivarPoly>{parse_poly("3*x*y + 3*y^4")});
  for (const auto& c : it->claims) CHECK(audit_claim(c));
  CHECK_FALSE(r.collision);
}

TEST_CASE("power curve checker") {
  const auto st = ctx_of("square_trace");
  CHECK(check_power_curve(st, 1, 1, CurveSide::nonnegative_trace).outcome == Outcome::unknown);
  CHECK(check_power_curve(st, 1, Rational(1, 2), CurveSide::nonnegative_trace).outcome == Outcome::not_applicable);
  const auto shear = ctx_of("shear");
  CHECK(check_power_curve(shear, 1, 1, CurveSide::nonnegative_trace).outcome == Outcome::proved_injective);
  CHECK(check_power_curve(shear, 1, 1, CurveSide::nonnegative_trace).theorem == "Corollary 1");
}

TEST_CASE("ratio line checker") {
  const auto st = ctx_of("square_trace");
  const auto c0 = check_ratio_line(st, 0);
  CHECK(c0.outcome == Outcome::unknown);
  REQUIRE(c0.refutation);
  const auto cubic = ctx_of("cubic");
  const auto c3 = check_ratio_line(cubic, 3);
  CHECK(c3.outcome == Outcome::proved_injective);
  CHECK(c3.theorem == "Corollary 2");
  CHECK_THROWS_AS(check_ratio_line(st, 5), std::invalid_argument);
}

TEST_CASE("spectral gap checkers") {
  const auto st = ctx_of("square_trace");
  const auto z3 = check_spectral_gap_real(st, 3);
  CHECK(z3.outcome == Outcome::proved_injective);
  CHECK(z3.theorem == "Theorem 6");
  const auto u1 = check_spectral_gap_circle(st, 1, square(5));
  CHECK(u1.outcome == Outcome::unknown);
  REQUIRE(u1.refutation);
  for (const auto& [x, y] : u1.refutation->points) {
    CHECK(evaluate(st.jd.trace, x, y) == 2);
    CHECK((abs(x) > 5 || abs(y) > 5));
  }
  CHECK(check_spectral_gap_real(ctx_of("cubic"), 3).outcome == Outcome::not_applicable);
}

TEST_CASE("trace checkers") {
  const auto st = ctx_of("square_trace");
  CHECK(check_trace_avoids(st, 3).outcome == Outcome::proved_injective);
  CHECK(check_trace_avoids(st, 2).outcome == Outcome::unknown);
  CHECK(check_trace_avoids(ctx_of("identity"), 0).outcome == Outcome::proved_injective);
  CHECK(check_trace_avoids(st, 3).theorem == "Corollary 5");
  CHECK(check_trace_bounded(ctx_of("identity")).outcome == Outcome::proved_injective);
  CHECK(check_trace_bounded(ctx_of("honesty")).outcome == Outcome::unknown);
}

TEST_CASE("criterion parameters are validated") {
  CriterionParams p;
  CHECK_NOTHROW(p.validate());
  p.a = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.c = Rational(9, 2);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.z = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.u = Rational(3, 2);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("honesty fixture stays unknown") {
  const auto r = certify_all(fixture("honesty"));
  CHECK(r.outcome == Outcome::unknown);
  CHECK_FALSE(r.collision);
  for (const auto& v : r.verdicts) CHECK(v.outcome == Outcome::unknown);
}

TEST_CASE("maps with collisions are never proved") {
  for (const char* name : {"fold", "exp_spiral"}) {
    const auto r = certify_all(fixture(name));
    CHECK(r.outcome != Outcome::proved_injective);
    REQUIRE(r.collision);
    CHECK(r.conclusion.find("NON-INJECTIVE (witnessed)") != std::string::npos);
    for (const auto& v : r.verdicts) CHECK(v.outcome != Outcome::proved_injective);
  }
  const auto ex = certify_all(fixture("exp_spiral"));
  CHECK(ex.outcome == Outcome::heuristic_only);
  REQUIRE(ex.evidence);
  CHECK(ex.evidence->samples == 21u * 21u);
}

TEST_CASE("orientation reversing maps are not applicable") {
  const auto r = certify_all(fixture("swap"));
  CHECK(r.outcome != Outcome::proved_injective);
  for (const auto& v : r.verdicts) CHECK(v.outcome == Outcome::not_applicable);
}

TEST_CASE("normalisation does not change conclusions") {
  for (const char* name : {"scaled_square_trace", "scaled_identity"}) {
    const auto spec = fixture(name);
    const auto cls = classify(jacobian_data(spec.p, spec.q));
    REQUIRE(cls.kind == Classification::Kind::jacobian_map);
    REQUIRE(cls.det_value != 1);
    const auto normal = make_polynomial_map(spec.name, spec.p, spec.q.scaled(Rational(1) / cls.det_value));
    const auto ra = certify_all(spec);
    const auto rb = certify_all(normal);
    INFO(name);
    CHECK(ra.normalized);
    CHECK_FALSE(rb.normalized);
    CHECK(outcomes(ra) == outcomes(rb));
    CHECK(ra.winner == rb.winner);
  }
  // scaling Q of square_trace by 3 normalises back to square_trace itself
  CHECK(outcomes(certify_all(fixture("scaled_square_trace"))) == outcomes(certify_all(fixture("square_trace"))));
}

TEST_CASE("adding sweep parameters never loses a proof") {
  CertifyOptions small;
  small.sweep.c = {Rational(1)};
  small.sweep.h = {Rational(1)};
  small.sweep.z = {Rational(2)};
  small.sweep.u = {Rational(0)};
  small.sweep.curves = {{Rational(1), Rational(1)}};
  const CertifyOptions full;
  CertifyOptions wider = full;
  wider.sweep.c.push_back(Rational(1, 2));
  wider.sweep.z.push_back(Rational(5));
  for (const auto& name : kCorpus) {
    if (name == "exp_spiral") continue;
    const auto spec = fixture(name);
    const auto rs = certify_all(spec, small);
    const auto rf = certify_all(spec, full);
    const auto rw = certify_all(spec, wider);
    INFO(name);
    if (rs.outcome == Outcome::proved_injective) CHECK(rf.outcome == Outcome::proved_injective);
    if (rf.outcome == Outcome::proved_injective) CHECK(rw.outcome == Outcome::proved_injective);
    const auto os = outcomes(rs);
    const auto of = outcomes(rf);
    for (const auto& [k, o] : os)
      if (of.count(k)) CHECK(of.at(k) == o);
  }
}

TEST_CASE("every proved verdict in the corpus audits") {
  for (const auto& name : kCorpus) {
    const auto r = certify_all(fixture(name));
    for (const auto& v : r.verdicts) {
      if (v.outcome != Outcome::proved_injective) continue;
      INFO(name << " " << v.criterion);
      CHECK_FALSE(v.claims.empty());
      for (const auto& c : v.claims) {
        CHECK(audit_claim(c));
        CHECK(audit_claim_text(c, serialize_certificate(c.cert)));
      }
    }
  }
}

TEST_CASE("audits reject claims the certificate does not support") {
  const auto r = certify_all(fixture("square_trace"));
  const auto it = std::find_if(r.verdicts.begin(), r.verdicts.end(),
                               [](const Verdict& v) { return v.criterion == "trace_bounded"; });
  REQUIRE(it != r.verdicts.end());
  Claim c = it->claims[1];
  REQUIRE(audit_claim(c));
  c.requirement = Claim::Requirement::positive;
  CHECK_FALSE(audit_claim(c));
  c = it->claims[1];
  c.poly = c.poly + BivarPoly(1);
  CHECK_FALSE(audit_claim(c));
}

TEST_CASE("reports are stable and omit timings") {
  const auto a = report_to_json(certify_all(fixture("quintic"))).dump();
  const auto b = report_to_json(certify_all(fixture("quintic"))).dump();
  CHECK(a == b);
  CHECK(a.find("wall") == std::string::npos);
  CertifyOptions eight;
  eight.positivity.threads = 8;
  CHECK(report_to_json(certify_all(fixture("quintic"), eight)).dump() == a);
}

TEST_CASE("text report lists every verdict") {
  const auto r = certify_all(fixture("square_trace"));
  const auto text = report_text(r);
  for (const auto& v : r.verdicts) CHECK(text.find(v.criterion) != std::string::npos);
  CHECK(text.find("PROVED_INJECTIVE") != std::string::npos);
  CHECK(text.find("Corollary 6") != std::string::npos);
}
