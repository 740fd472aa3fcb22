// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "planar/certificate_json.hpp"
#include "planar/certify.hpp"
#include "planar/cli.hpp"
#include "planar/falsify.hpp"
#include "planar/jacobian.hpp"
#include "planar/parser.hpp"
#include "planar/spectrum.hpp"

using namespace planar;

namespace tol {
constexpr double kCertifySeconds = 1.0;
constexpr double kEigenOracle = 1e-10;
constexpr double kGroupMembership = 1e-9;
constexpr double kBranchSign = 1e-12;
constexpr double kBranchJump = 1e-3;
constexpr double kFinestPathStep = 1e-4;
constexpr double kResidual = 1e-8;
constexpr double kSeparation = 1.0;
constexpr double kPeriod = 1e-6;
constexpr std::size_t kFalsifyBudget = 100'000;
constexpr std::size_t kHonestyBudget = 1'000'000;
constexpr int kMutations = 100;
}  // namespace tol

namespace {

const std::vector<std::string> kCorpus = {"square_trace", "identity", "shear", "cubic", "honesty", "swap",
                                          "exp_spiral", "scaled_identity", "scaled_square_trace", "fold",
                                          "quintic"};

struct Result {
  bool pass = false;
  std::string detail;
};

const Verdict* find_verdict(const Report& r, const std::string& criterion) {
  for (const auto& v : r.verdicts)
    if (v.criterion == criterion) return &v;
  return nullptr;
}

std::string cli_out(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  planar::cli::run(args, out, err);
  return out.str();
}

Result criterion1() {
  const auto spec = fixture("square_trace");
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = certify_all(spec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Verdict* v = find_verdict(report, "trace_bounded");
  if (report.outcome != planar::Outcome::proved_injective || !report.winner || *report.winner != "trace_bounded" ||
      !v || v->theorem != "Corollary 6") {
    return {false, "not proved via Corollary 6"};
  }
  const auto jd = jacobian_data(spec.p, spec.q);
  const BivarPoly root = parse_poly("3*x*y + 3*y^4");
  bool det_ok = false, square_ok = false;
  for (const auto& c : v->claims) {
    if (c.cert.kind == CertKind::constant && c.poly == BivarPoly(1) && jd.det == BivarPoly(1)) {
      det_ok = verify_certificate(c.poly, c.cert);
    }
    if (c.cert.kind == CertKind::perfect_square && c.poly == BivarPoly(2) - jd.trace) {
      // exact identity 2 - T = (3xy + 3y^4)^2, checked here independently
      square_ok = c.cert.squares == std::vector<BivarPoly>{root} && c.cert.offset == 0 &&
                  oracle::terms_of(c.poly) == oracle::mul(oracle::terms_of(root), oracle::terms_of(root)) &&
                  verify_certificate(c.poly, c.cert);
    }
  }
  std::ostringstream d;
  d << "D=1 " << (det_ok ? "ok" : "bad") << ", 2-T square " << (square_ok ? "ok" : "bad") << ", " << secs << " s";
  return {det_ok && square_ok && secs < tol::kCertifySeconds, d.str()};
}

Result criterion2() {
  const auto spec = fixture("square_trace");
  const auto jd = jacobian_data(spec.p, spec.q);
  return {jd.det == BivarPoly(1), "D = " + jd.det.to_string()};
}

Result criterion3() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Matrix2 m{u(rng), u(rng), u(rng), u(rng)};
    const auto e = eigen_at(m);
    const auto o = oracle::eigenvalues(m.a, m.b, m.c, m.d);
    worst = std::max(worst, oracle::pair_distance(e.lambda1, e.lambda2, o[0], o[1]));
  }
  std::ostringstream d;
  d << "max |closed form - QR| = " << worst;
  return {worst < tol::kEigenOracle, d.str()};
}

Result criterion4() {
  const auto map = PlanarMap::from_spec(fixture("square_trace"));
  const auto samples = sample_grid(map, GridSpec{-2, 2, -2, 2, 101, 101});
  double worst_circle = 0.0, worst_product = 0.0;
  std::size_t zero_real = 0, invalid = 0;
  for (const auto& s : samples) {
    if (!s.valid) {
      ++invalid;
      continue;
    }
    for (auto l : {s.lambda1, s.lambda2}) {
      if (l.imag() != 0.0) worst_circle = std::max(worst_circle, std::fabs(std::abs(l) - 1.0));
      else if (l.real() == 0.0) ++zero_real;
    }
    if (s.lambda1.imag() == 0.0) {
      worst_product = std::max(worst_product, std::fabs(std::fabs(s.lambda1.real() * s.lambda2.real()) - 1.0));
    }
  }
  std::ostringstream d;
  d << "circle dev " << worst_circle << ", product dev " << worst_product << ", zero " << zero_real
    << ", invalid " << invalid;
  return {samples.size() == 101u * 101u && invalid == 0 && zero_real == 0 &&
              worst_circle < tol::kGroupMembership && worst_product < tol::kGroupMembership,
          d.str()};
}

Result criterion5() {
  const auto map = PlanarMap::from_spec(fixture("square_trace"));
  const SpectrumSampler sampler(map);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  // path steps 1e-4 * 2^k, coarse to fine
  std::vector<double> steps;
  for (int k = 10; k >= 0; --k) steps.push_back(tol::kFinestPathStep * std::ldexp(1.0, k));
  std::size_t sign_violations = 0, non_monotone = 0, above = 0;
  double worst_finest = 0.0;
  for (int path = 0; path < 100; ++path) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const double length = std::hypot(b.x - a.x, b.y - a.y);
    double previous = INFINITY;
    bool monotone = true;
    double finest = 0.0;
    for (double h : steps) {
      const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(length / h)));
      const auto s = sampler.segment(a, b, n);
      double jump = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const auto& e = s[k];
        if (e.lambda1.real() * e.lambda2.real() < 0 && e.lambda1.real() < -tol::kBranchSign) ++sign_violations;
        if (k > 0) {
          jump = std::max({jump, std::abs(e.lambda1 - s[k - 1].lambda1), std::abs(e.lambda2 - s[k - 1].lambda2)});
        }
      }
      if (jump > previous) monotone = false;
      previous = jump;
      finest = jump;
    }
    if (!monotone) ++non_monotone;
    if (finest >= tol::kBranchJump) ++above;
    worst_finest = std::max(worst_finest, finest);
  }
  std::ostringstream d;
  d << "sign violations " << sign_violations << ", worst jump at h=1e-4 " << worst_finest << ", paths above "
    << tol::kBranchJump << ": " << above << ", non-monotone paths " << non_monotone;
  return {sign_violations == 0 && above == 0 && non_monotone == 0, d.str()};
}

Result criterion6() {
  const auto spec = fixture("cubic");
  const auto ctx = make_context(spec.p, spec.q);
  const auto v = check_ratio_line(ctx, Rational(3));
  const BivarPoly target = parse_poly("x^4 + x^2 + 1");
  bool found = false, replays = false;
  for (const auto& c : v.claims) {
    if (c.cert.kind != CertKind::even_monomial || c.poly != target) continue;
    found = true;
    replays = verify_certificate(target, c.cert) && audit_claim(c) &&
              audit_claim_text(c, serialize_certificate(parse_certificate(serialize_certificate(c.cert))));
  }
  return {v.outcome == planar::Outcome::proved_injective && v.theorem == "Corollary 2" && found && replays,
          std::string("outcome ") + to_string(v.outcome) + ", even_monomial(x^4 + x^2 + 1) " +
              (found ? (replays ? "replays" : "fails replay") : "missing")};
}

Result criterion7() {
  const auto map = PlanarMap::from_spec(fixture("exp_spiral"));
  FalsifyOptions opts;
  opts.seed = 1;
  opts.budget = tol::kFalsifyBudget;
  const auto r = search_collision(map, opts);
  if (!r.witness) return {false, "no witness"};
  const auto& w = *r.witness;
  const auto fp = map(w.p.x, w.p.y), fq = map(w.q.x, w.q.y);
  const double residual = std::hypot(fp[0] - fq[0], fp[1] - fq[1]);
  const double separation = std::hypot(w.q.x - w.p.x, w.q.y - w.p.y);
  const double dx = std::fabs(w.q.x - w.p.x);
  std::ostringstream d;
  d.precision(17);
  d << "residual " << residual << ", separation " << separation << ", dx " << dx << ", evals " << r.evaluations;
  return {residual < tol::kResidual && separation > tol::kSeparation &&
              std::fabs(dx - 2 * std::numbers::pi) < tol::kPeriod && r.evaluations <= tol::kFalsifyBudget,
          d.str()};
}

Result criterion8() {
  const auto spec = fixture("honesty");
  std::size_t not_unknown = 0, witnesses = 0, proved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CertifyOptions opts;
    opts.seed = seed;
    opts.falsify_budget = tol::kHonestyBudget;
    const auto r = certify_all(spec, opts);
    for (const auto& v : r.verdicts) not_unknown += v.outcome != planar::Outcome::unknown;
    witnesses += r.collision.has_value();
    proved += r.outcome == planar::Outcome::proved_injective ||
              report_text(r).find("INJECTIVE (proved") != std::string::npos;
    FalsifyOptions f;
    f.seed = seed;
    f.budget = tol::kHonestyBudget;
    witnesses += search_collision(PlanarMap::from_spec(spec), f).witness.has_value();
  }
  std::ostringstream d;
  d << "non-unknown verdicts " << not_unknown << ", witnesses " << witnesses << ", proved reports " << proved;
  return {not_unknown == 0 && witnesses == 0 && proved == 0, d.str()};
}

Result criterion9() {
  std::size_t mismatches = 0;
  for (const auto& name : kCorpus) {
    const auto path = fixture_path(name);
    const auto a = cli_out({"certify", path, "--format", "json"});
    const auto b = cli_out({"certify", path, "--format", "json"});
    const auto c = cli_out({"certify", path, "--format", "json", "--threads", "8"});
    mismatches += a.empty() || a != b || a != c;
  }
  // branch and bound certificates directly
  const auto p = parse_poly("x^4 + y^4 - 3*x*y + 1");
  PositivityOptions one, eight;
  eight.threads = 8;
  const auto r1 = nonvanishing_on(p, Region::inside(square(4)), one);
  const auto r8 = nonvanishing_on(p, Region::inside(square(4)), eight);
  const bool bb_same = r1.status == r8.status && r1.cert.has_value() == r8.cert.has_value() &&
                       (!r1.cert || serialize_certificate(*r1.cert) == serialize_certificate(*r8.cert));
  return {mismatches == 0 && bb_same,
          std::to_string(mismatches) + " report mismatches, branch and bound " + (bb_same ? "identical" : "differs")};
}

Result criterion10() {
  std::vector<Claim> claims;
  std::size_t failed = 0;
  for (const auto& name : kCorpus) {
    const auto r = certify_all(fixture(name));
    for (const auto& v : r.verdicts) {
      if (v.outcome != planar::Outcome::proved_injective) continue;
      for (const auto& c : v.claims) {
        if (!verify_certificate(c.poly, c.cert) || !audit_claim(c)) ++failed;
        claims.push_back(c);
      }
    }
  }
  if (claims.empty()) return {false, "no proved claims"};
  std::mt19937_64 rng(10);
  std::size_t accepted = 0;
  for (int k = 0; k < tol::kMutations; ++k) {
    const Claim& c = claims[static_cast<std::size_t>(k) % claims.size()];
    std::string text = serialize_certificate(c.cert);
    const auto at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
    char ch;
    do ch = static_cast<char>(std::uniform_int_distribution<int>(32, 126)(rng)); while (ch == text[at]);
    text[at] = ch;
    accepted += audit_claim_text(c, text);
  }
  std::ostringstream d;
  d << claims.size() << " claims, " << failed << " failed replay, " << accepted << "/" << tol::kMutations
    << " mutations accepted";
  return {failed == 0 && accepted == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
      {"1 square_trace certified by the trace bound", criterion1},
      {"2 exact constant determinant", criterion2},
      {"3 eigenvalues match QR oracle", criterion3},
      {"4 grid spectrum lies in G", criterion4},
      {"5 branch sign and continuity on paths", criterion5},
      {"6 cubic ratio line c = 3 by even monomials", criterion6},
      {"7 exponential map collision", criterion7},
      {"8 honesty fixture stays unknown", criterion8},
      {"9 deterministic reports", criterion9},
      {"10 certificate audit and mutation", criterion10},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Result o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %s  (%s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
