#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "planar/certificate_json.hpp"
#include "planar/parser.hpp"
#include "planar/positivity.hpp"

using namespace planar;

namespace {

using GS = GlobalSignResult::Status;
using NV = NonvanishingResult::Status;

BivarPoly P(const char* s) { return parse_poly(s); }
BivarPoly example_trace() { return P("2 - 9*y^2*(x + y^3)^2"); }

bool holds(const Constraint& c, double v) {
  switch (c.rel) {
    case Relation::ge0: return v >= 0;
    case Relation::le0: return v <= 0;
    case Relation::gt0: return v > 0;
    case Relation::lt0: return v < 0;
  }
  return false;
}

bool in_region(const Region& r, const std::optional<Box>& chosen, double x, double y) {
  switch (r.kind) {
    case Region::Kind::whole_plane: break;
    case Region::Kind::box:
      if (!r.box.x.contains(x) || !r.box.y.contains(y)) return false;
      break;
    case Region::Kind::outside_box:
      if (r.box.x.contains(x) && r.box.y.contains(y)) return false;
      break;
    case Region::Kind::eventually:
      if (!chosen) return false;
      if (chosen->x.contains(x) && chosen->y.contains(y)) return false;
      break;
  }
  for (const auto& c : r.constraints)
    if (!holds(c, CompiledPoly(c.poly).eval(x, y))) return false;
  return true;
}

// Statistical shadow of a proof: sampled points of the region never
// contradict the claimed sign.
std::size_t shadow_violations(const BivarPoly& p, Sign claimed, const Region& r, const std::optional<Box>& chosen,
                              std::size_t n, std::uint64_t seed) {
  oracle::Gen gen(seed);
  const CompiledPoly cp(p);
  std::size_t bad = 0, checked = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double x, y;
    if (r.kind == Region::Kind::box) {
      x = gen.real(r.box.x.lo, r.box.x.hi);
      y = gen.real(r.box.y.lo, r.box.y.hi);
    } else {
      const double s = std::ldexp(1.0, gen.integer(0, 10));
      x = gen.real(-s, s);
      y = gen.real(-s, s);
    }
    if (!in_region(r, chosen, x, y)) continue;
    ++checked;
    const double v = cp.eval(x, y);
    // exact evaluation settles samples whose float value is near zero
    const int s = std::fabs(v) > 1e-6 ? (v > 0 ? 1 : -1) : sgn(evaluate(p, Rational(x), Rational(y)));
    const bool ok = claimed == Sign::positive ? s > 0 : claimed == Sign::negative ? s < 0 : s != 0;
    bad += !ok;
  }
  return checked == 0 ? n : bad;  // an empty sample proves nothing
}

SignCertificate round_trip(const SignCertificate& c) { return parse_certificate(serialize_certificate(c)); }

}  // namespace

TEST_CASE("global_sign on square_trace facts") {
  const auto two_minus_t = BivarPoly(2) - example_trace();
  const auto r = global_sign(two_minus_t);
  CHECK(r.status == GS::nonnegative);
  REQUIRE(r.cert);
  CHECK(r.cert->kind == CertKind::perfect_square);
  CHECK(r.cert->squares == std::vector<BivarPoly>{P("3*x*y + 3*y^4")});
  CHECK(r.cert->offset == 0);
  CHECK(verify_certificate(two_minus_t, *r.cert));
}

TEST_CASE("global_sign even monomials and indefinite") {
  const auto p = P("x^4 + x^2 + 1");
  const auto r = global_sign(p);
  CHECK(r.status == GS::positive);
  REQUIRE(r.cert);
  CHECK(r.cert->kind == CertKind::even_monomial);
  CHECK(r.cert->offset == 1);
  oracle::Gen gen(1);
  const CompiledPoly cp(p);
  double lowest = INFINITY;
  for (int k = 0; k < 100000; ++k) lowest = std::min(lowest, cp.eval(gen.real(-50, 50), gen.real(-50, 50)));
  CHECK(lowest >= 1.0);

  const auto x = global_sign(P("x"));
  CHECK(x.status == GS::indefinite);
  REQUIRE(x.witness);
  REQUIRE(x.witness->points.size() == 2);
  const auto& w = x.witness->points;
  CHECK(sgn(w[0].first) * sgn(w[1].first) < 0);

  CHECK(global_sign(P("-3")).status == GS::negative);
  CHECK(global_sign(P("-(x^2 + y^2) - 1")).status == GS::negative);
  CHECK(global_sign(P("0")).status == GS::nonnegative);
}

TEST_CASE("global_sign falls through to leading form plus branch and bound") {
  const auto p = P("x^4 + y^4 - x*y + 1");
  const auto r = global_sign(p);
  CHECK(r.status == GS::positive);
  REQUIRE(r.cert);
  CHECK(r.cert->kind == CertKind::cover);
  CHECK(verify_certificate(p, *r.cert));
  CHECK(certificate_is_global(*r.cert));
  CHECK(shadow_violations(p, r.cert->claimed, Region::whole_plane(), std::nullopt, 200000, 3) == 0);
}

TEST_CASE("user sums of squares are verified, not trusted") {
  const auto p = P("x^2 - 2*x*y + 2*y^2");
  PositivityOptions opts;
  opts.sos_hints = {{{P("x - y"), P("y")}, Rational(0)}};
  const auto r = global_sign(p, opts);
  CHECK((r.status == GS::nonnegative || r.status == GS::positive));
  REQUIRE(r.cert);
  CHECK(verify_certificate(p, *r.cert));
  SignCertificate forged = *r.cert;
  forged.kind = CertKind::sos_user;
  forged.squares = {P("x - y"), P("2*y")};
  forged.claimed = Sign::nonnegative;
  forged.offset = 0;
  CHECK_FALSE(verify_certificate(p, forged));
}

TEST_CASE("eventual_sign") {
  const auto circle = eventual_sign(P("x^2 + y^2 - 5"));
  CHECK(circle.status == EventualSignResult::Status::positive_outside);
  CHECK(circle.radius >= std::sqrt(5.0) / std::sqrt(2.0));
  REQUIRE(circle.cert);
  CHECK(verify_certificate(P("x^2 + y^2 - 5"), *circle.cert));

  const auto c = eventual_sign(P("-3"));
  CHECK(c.status == EventualSignResult::Status::negative_outside);
  CHECK(c.radius == 0.0);

  CHECK(eventual_sign(BivarPoly(2) - example_trace()).status == EventualSignResult::Status::unknown);
  CHECK_THROWS_AS(eventual_sign(BivarPoly()), std::invalid_argument);

  const auto strip = eventual_sign(P("x^3 - 7*x"));
  CHECK(strip.status == EventualSignResult::Status::unknown);
}

TEST_CASE("eventual sign radius is sound") {
  oracle::Gen gen(47);
  for (int k = 0; k < 40; ++k) {
    auto t = gen.poly(3, 6);
    t = oracle::add(t, oracle::mono(gen.integer(1, 4), 4, 0));
    t = oracle::add(t, oracle::mono(gen.integer(1, 4), 0, 4));
    const auto p = oracle::to_poly(t);
    const auto r = eventual_sign(p);
    REQUIRE(r.status == EventualSignResult::Status::positive_outside);
    REQUIRE(r.cert);
    CHECK(verify_certificate(p, *r.cert));
    const double R = r.radius;
    for (int s = 0; s < 2000; ++s) {
      const double a = gen.real(-1, 1) * 4 * R, b = (gen.integer(0, 1) ? 1 : -1) * gen.real(R, 4 * R) * 1.0001;
      const double x = s % 2 ? a : b, y = s % 2 ? b : a;
      CHECK(sgn(oracle::eval(t, Rational(x), Rational(y))) > 0);
    }
  }
}

TEST_CASE("nonvanishing_on examples") {
  const auto t = example_trace();
  const auto three = nonvanishing_on(t - BivarPoly(3), Region::whole_plane());
  CHECK(three.status == NV::proved);
  REQUIRE(three.cert);
  CHECK(verify_certificate(t - BivarPoly(3), *three.cert));
  CHECK(certificate_covers(*three.cert, Region::whole_plane()));

  const auto two = nonvanishing_on(t - BivarPoly(2), Region::whole_plane());
  CHECK(two.status == NV::refuted);
  REQUIRE(two.witness);
  bool has_origin = false;
  for (const auto& pt : two.witness->points) has_origin |= pt.first == 0 && pt.second == 0;
  CHECK(has_origin);

  const auto box = Region::inside(square(10));
  const auto b = nonvanishing_on(P("x^2 + y^2 + 1"), box);
  CHECK(b.status == NV::proved);
  REQUIRE(b.cert);
  CHECK(verify_certificate(P("x^2 + y^2 + 1"), *b.cert));
  CHECK(certificate_covers(*b.cert, box));
}

TEST_CASE("unbounded zero sets refute eventual claims") {
  const auto r = nonvanishing_on(example_trace() - BivarPoly(2), Region::eventually());
  CHECK(r.status == NV::refuted);
  REQUIRE(r.witness);
  for (const auto& [x, y] : r.witness->points) CHECK(evaluate(example_trace(), x, y) == 2);
}

TEST_CASE("constrained regions") {
  // y^2 - x^2 + 5 > 0 on the unit disc
  const auto disc = Region::whole_plane().with({P("x^2 + y^2 - 1"), Relation::le0});
  const auto r = nonvanishing_on(P("x^2 - y^2 - 5"), disc);
  CHECK(r.status == NV::proved);
  REQUIRE(r.cert);
  CHECK(verify_certificate(P("x^2 - y^2 - 5"), *r.cert));
  CHECK(certificate_covers(*r.cert, disc));
  CHECK(shadow_violations(P("x^2 - y^2 - 5"), r.cert->claimed, disc, r.chosen_k, 1000000, 5) == 0);

  // the origin is a zero inside the disc
  const auto z = nonvanishing_on(P("x^3 - y"), disc);
  CHECK(z.status == NV::refuted);

  // infeasible constraint set
  const auto empty = Region::whole_plane().with({P("x^2 + 1"), Relation::lt0});
  const auto e = nonvanishing_on(P("x"), empty);
  CHECK(e.status == NV::proved);
  REQUIRE(e.cert);
  CHECK(e.cert->kind == CertKind::infeasible);
  CHECK(verify_certificate(P("x"), *e.cert));
}

TEST_CASE("proofs survive a sampled shadow test") {
  struct Case {
    const char* poly;
    Region region;
  };
  const std::vector<Case> cases = {
      {"x^4 + y^4 - x*y + 1", Region::whole_plane()},
      {"x^2 + y^2 - 5", Region::eventually()},
      {"x^2 - 2*x*y + y^2 + 1/100", Region::inside(square(3))},
      {"x^6 + y^6 - 3*x^2*y^2 + 2", Region::whole_plane()},
      {"x^2 + y^2 - 4", Region::outside(square(3))},
  };
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const auto p = P(c.poly);
    const auto r = nonvanishing_on(p, c.region);
    INFO(c.poly);
    REQUIRE(r.status == NV::proved);
    REQUIRE(r.cert);
    CHECK(verify_certificate(p, *r.cert));
    CHECK(shadow_violations(p, r.cert->claimed, c.region, r.chosen_k, 1000000, ++seed) == 0);
  }
}

TEST_CASE("branch and bound is thread independent") {
  const auto p = P("x^2 - 2*x*y + y^2 + 1/100");
  const auto region = Region::inside(square(3));
  PositivityOptions one, eight;
  eight.threads = 8;
  const auto a = nonvanishing_on(p, region, one);
  const auto b = nonvanishing_on(p, region, eight);
  REQUIRE(a.cert);
  REQUIRE(b.cert);
  CHECK(serialize_certificate(*a.cert) == serialize_certificate(*b.cert));
  const auto ga = global_sign(P("x^4 + y^4 - x*y + 1"), one);
  const auto gb = global_sign(P("x^4 + y^4 - x*y + 1"), eight);
  REQUIRE(ga.cert);
  REQUIRE(gb.cert);
  CHECK(serialize_certificate(*ga.cert) == serialize_certificate(*gb.cert));
}

TEST_CASE("larger budgets never lose a proof") {
  const auto p = P("x^2 - 2*x*y + y^2 + 1/100");
  const auto region = Region::inside(square(3));
  bool proved = false;
  for (std::size_t budget = 1; budget <= (1U << 16); budget *= 2) {
    PositivityOptions opts;
    opts.budget = budget;
    const auto r = nonvanishing_on(p, region, opts);
    if (proved) CHECK(r.status == NV::proved);
    proved = proved || r.status == NV::proved;
    CHECK(r.status != NV::refuted);
  }
  CHECK(proved);
}

TEST_CASE("one_sided_bound") {
  const auto b = one_sided_bound(example_trace());
  REQUIRE(b);
  CHECK(b->upper);
  CHECK(b->bound == 2);
  CHECK(verify_certificate(BivarPoly(b->bound) - example_trace(), b->cert));
  CHECK_FALSE(one_sided_bound(P("2 + 4*y*(x + y^2)")));
  const auto lower = one_sided_bound(P("x^2 + 3"));
  REQUIRE(lower);
  CHECK_FALSE(lower->upper);
  CHECK(lower->bound == 3);
}

TEST_CASE("verify_certificate rejects wrong evidence") {
  SignCertificate c;
  c.kind = CertKind::even_monomial;
  c.claimed = Sign::nonnegative;
  c.poly = P("x");
  c.offset = 0;
  CHECK_FALSE(verify_certificate(P("x"), c));

  c.poly = P("x^4 + x^2 + 1");
  c.offset = 1;
  c.claimed = Sign::positive;
  CHECK(verify_certificate(P("x^4 + x^2 + 1"), c));
  CHECK_FALSE(verify_certificate(P("x^4 + x^2 + 2"), c));

  SignCertificate sq;
  sq.kind = CertKind::perfect_square;
  sq.claimed = Sign::nonnegative;
  sq.poly = BivarPoly(2) - example_trace();
  sq.squares = {P("3*x*y + 3*y^4")};
  CHECK(verify_certificate(sq.poly, sq));
  sq.claimed = Sign::positive;
  CHECK_FALSE(verify_certificate(sq.poly, sq));
}

TEST_CASE("tampered branch and bound logs fail replay") {
  const auto p = P("x^2 - 2*x*y + y^2 + 1/100");
  const auto r = nonvanishing_on(p, Region::inside(square(3)));
  REQUIRE(r.cert);
  REQUIRE(r.cert->kind == CertKind::bb_tree);
  REQUIRE_FALSE(r.cert->boxes.empty());
  auto bad = *r.cert;
  auto& log = bad.boxes.front().log;
  const auto split = log.find('S');
  REQUIRE(split != std::string::npos);
  log.erase(split, 1);
  CHECK_FALSE(verify_certificate(p, bad));
}

TEST_CASE("certificate JSON is canonical and strict") {
  const auto r = global_sign(P("x^4 + y^4 - x*y + 1"));
  REQUIRE(r.cert);
  const std::string text = serialize_certificate(*r.cert);
  CHECK(serialize_certificate(round_trip(*r.cert)) == text);
  CHECK(verify_certificate_text(text, P("x^4 + y^4 - x*y + 1"), Region::whole_plane()));
  CHECK_FALSE(verify_certificate_text(text, P("x^4 + y^4 - x*y"), Region::whole_plane()));
  CHECK_FALSE(verify_certificate_text(text + " ", P("x^4 + y^4 - x*y + 1"), Region::whole_plane()));

  auto j = certificate_to_json(*r.cert);
  j["unexpected"] = 1;
  CHECK_THROWS_AS(certificate_from_json(j), std::invalid_argument);
  CHECK_THROWS(parse_certificate("{"));

  const auto ev = eventual_sign(P("x^2 + y^2 - 5"));
  REQUIRE(ev.cert);
  const Box unbounded{Interval(-INFINITY, 1.0), Interval(0.0, INFINITY)};
  const auto bj = box_to_json(unbounded);
  CHECK(bj.dump().find("\"-inf\"") != std::string::npos);
  CHECK(bj.dump().find("\"inf\"") != std::string::npos);
}

TEST_CASE("single byte mutations break certificate text") {
  const auto p = example_trace() - BivarPoly(3);
  const auto r = nonvanishing_on(p, Region::whole_plane());
  REQUIRE(r.cert);
  const std::string text = serialize_certificate(*r.cert);
  REQUIRE(verify_certificate_text(text, p, Region::whole_plane()));
  oracle::Gen gen(53);
  for (int k = 0; k < 200; ++k) {
    std::string m = text;
    const auto at = static_cast<std::size_t>(gen.integer(0, static_cast<int>(m.size()) - 1));
    char c;
    do c = static_cast<char>(gen.integer(32, 126)); while (c == m[at]);
    m[at] = c;
    CHECK_FALSE(verify_certificate_text(m, p, Region::whole_plane()));
  }
}
