#include "planar/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "planar/certificate_json.hpp"

namespace planar {

using nlohmann::json;

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::proved_injective: return "PROVED_INJECTIVE";
    case Outcome::unknown: return "UNKNOWN";
    case Outcome::not_applicable: return "NOT_APPLICABLE";
    case Outcome::heuristic_only: return "HEURISTIC_ONLY";
  }
  return "?";
}

std::string to_string(Claim::Requirement r) {
  switch (r) {
    case Claim::Requirement::positive: return "positive";
    case Claim::Requirement::nonnegative: return "nonnegative";
    case Claim::Requirement::nonvanishing: return "nonvanishing";
  }
  return "?";
}

bool audit_claim(const Claim& claim) {
  if (!verify_certificate(claim.poly, claim.cert)) return false;
  switch (claim.requirement) {
    case Claim::Requirement::positive:
      return claim.cert.claimed == Sign::positive && certificate_is_global(claim.cert);
    case Claim::Requirement::nonnegative:
      return (claim.cert.claimed == Sign::positive || claim.cert.claimed == Sign::nonnegative) &&
             certificate_is_global(claim.cert);
    case Claim::Requirement::nonvanishing:
      return certificate_covers(claim.cert, claim.region);
  }
  return false;
}

bool audit_claim_text(const Claim& claim, const std::string& cert_text) {
  try {
    Claim c = claim;
    c.cert = parse_certificate(cert_text);
    if (serialize_certificate(c.cert) != cert_text) return false;
    return audit_claim(c);
  } catch (const std::exception&) {
    return false;
  }
}

void CriterionParams::validate() const {
  if (sgn(a) <= 0) throw std::invalid_argument("a must be positive");
  if (sgn(b) <= 0) throw std::invalid_argument("b must be positive");
  if (c < 0 || c > 4) throw std::invalid_argument("c must lie in [0, 4]");
  if (u < -1 || u > 1) throw std::invalid_argument("u must lie in [-1, 1]");
  if (z == 0 || z == 1 || z == -1) throw std::invalid_argument("z must not be -1, 0 or 1");
}

SweepParams::SweepParams() {
  for (int k = -4; k <= 4; ++k) {
    Rational v(k, 2);
    v.canonicalize();
    h.push_back(v);
  }
}

CheckContext make_context(const BivarPoly& p, const BivarPoly& q, const PositivityOptions& options) {
  CheckContext ctx;
  ctx.options = options;
  ctx.jd = jacobian_data(p, q);
  ctx.classification = classify(ctx.jd, options);
  const auto& cls = ctx.classification;
  if (cls.kind == Classification::Kind::jacobian_map && sgn(cls.det_value) > 0 && cls.det_value != 1) {
    ctx.jd = jacobian_data(p, q.scaled(Rational(1) / cls.det_value));
    ctx.classification = classify(ctx.jd, options);
    ctx.normalized = true;
  }
  return ctx;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const Rational& q) { return to_string(q); }

Region region_for(const std::optional<Box>& k) { return k ? Region::outside(*k) : Region::eventually(); }

std::string region_label(const std::optional<Box>& k) {
  return k ? "outside K = " + k->x.to_string() + " x " + k->y.to_string() : "outside some compact K";
}

class Check {
 public:
  Check(std::string criterion, std::string theorem) : start_(Clock::now()) {
    v_.criterion = std::move(criterion);
    v_.theorem = std::move(theorem);
  }

  void claim(Claim c) { v_.claims.push_back(std::move(c)); }
  void note(const std::string& n) { v_.notes += (v_.notes.empty() ? "" : "; ") + n; }

  Verdict not_applicable(const std::string& why) {
    v_.outcome = Outcome::not_applicable;
    v_.claims.clear();
    v_.notes = why;
    return finish();
  }

  // Requires poly != 0 on region; the verdict is proved once every claim audits.
  Verdict nonvanishing(const CheckContext& ctx, const std::string& statement, const BivarPoly& poly,
                       const Region& region, std::string notes = {}) {
    const auto r = nonvanishing_on(poly, region, ctx.options);
    v_.notes = std::move(notes);
    auto add_note = [this](const std::string& n) {
      if (n.empty()) return;
      if (!v_.notes.empty()) v_.notes += "; ";
      v_.notes += n;
    };
    if (r.status == NonvanishingResult::Status::proved && r.cert) {
      claim({statement, poly, Claim::Requirement::nonvanishing, region, *r.cert});
      if (r.chosen_k) add_note("K = " + r.chosen_k->x.to_string() + " x " + r.chosen_k->y.to_string());
      return settle();
    }
    v_.outcome = Outcome::unknown;
    v_.claims.clear();
    if (r.status == NonvanishingResult::Status::refuted) {
      v_.refutation = r.witness;
      add_note("hypothesis fails: " + statement + " is violated (" + (r.witness ? r.witness->note : "") + ")");
    } else {
      add_note("not certified: " + (r.note.empty() ? std::string("no certificate found") : r.note));
    }
    return finish();
  }

  Verdict settle() {
    v_.outcome = Outcome::proved_injective;
    for (const auto& c : v_.claims) {
      if (!audit_claim(c)) {
        v_.outcome = Outcome::unknown;
        v_.notes += (v_.notes.empty() ? "" : "; ") + std::string("certificate for '") + c.statement +
                    "' failed replay";
      }
    }
    return finish();
  }

  Verdict unknown(const std::string& why) {
    v_.outcome = Outcome::unknown;
    v_.claims.clear();
    v_.notes = why;
    return finish();
  }

 private:
  Verdict finish() {
    v_.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return v_;
  }
  Verdict v_;
  Clock::time_point start_;
};

bool positive_det(const CheckContext& ctx) { return ctx.classification.det_sign > 0 && ctx.classification.det_cert; }

bool unit_det(const CheckContext& ctx) {
  return ctx.classification.kind == Classification::Kind::jacobian_map && ctx.classification.det_value == 1;
}

std::string unit_det_missing(const CheckContext& ctx) {
  const auto& c = ctx.classification;
  if (c.kind != Classification::Kind::jacobian_map) return "needs a constant determinant; D is " + c.describe();
  return "determinant " + to_string(c.det_value) + " < 0 reverses orientation; not normalisable to D = 1";
}

Claim det_claim(const CheckContext& ctx) {
  const bool one = unit_det(ctx);
  return {one ? "D = 1" : "D > 0", ctx.jd.det, Claim::Requirement::positive, Region::whole_plane(),
          *ctx.classification.det_cert};
}

std::string with_params(const std::string& name, const std::vector<std::pair<std::string, Rational>>& params) {
  std::string s = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) s += ",";
    s += params[i].first + "=" + fmt(params[i].second);
  }
  return s + ")";
}

}  // namespace

Verdict check_power_curve(const CheckContext& ctx, const Rational& a, const Rational& b, CurveSide side,
                          const std::optional<Box>& k) {
  const bool nonneg = side == CurveSide::nonnegative_trace;
  Check chk(with_params(nonneg ? "power_curve.nonneg" : "power_curve.nonpos", {{"a", a}, {"b", b}}), "Corollary 1");
  if (sgn(a) <= 0 || sgn(b) <= 0) return chk.not_applicable("a and b must be positive");
  if (!positive_det(ctx)) return chk.not_applicable("needs D > 0 certified; D is " + ctx.classification.describe());
  const Integer p = b.get_num();
  const Integer q = b.get_den();
  if (q % 2 == 0) return chk.not_applicable("b = " + fmt(b) + " has an even denominator");
  if (!p.fits_uint_p() || !q.fits_uint_p() || p > 64 || q > 64) return chk.not_applicable("exponent too large");
  const unsigned pu = static_cast<unsigned>(p.get_ui());
  const unsigned qu = static_cast<unsigned>(q.get_ui());
  chk.claim(det_claim(ctx));
  const auto& jd = ctx.jd;
  BivarPoly g;
  try {
    Rational a2q(1);
    for (unsigned i = 0; i < qu; ++i) a2q *= a * a;
    const BivarPoly lhs = power(BivarPoly(4) * jd.det - jd.trace * jd.trace, qu, BivarPoly::kUnlimited);
    const BivarPoly rhs = power(jd.trace, 2 * pu, BivarPoly::kUnlimited).scaled(a2q);
    g = lhs - rhs;
    if (g.degree() > 4 * BivarPoly::kDefaultMaxDegree) return chk.unknown("curve polynomial degree too large");
  } catch (const DegreeLimitError& e) {
    return chk.unknown(e.what());
  }
  Region region = region_for(k)
                      .with({jd.trace, nonneg ? Relation::ge0 : Relation::le0})
                      .with({jd.disc, Relation::lt0});
  const std::string statement = std::string("sqrt(-disc) != ") + fmt(a) + "*" + (nonneg ? "T" : "(-T)") + "^" +
                                fmt(b) + " where " + (nonneg ? "T >= 0" : "T <= 0") + " and disc < 0, " +
                                region_label(k);
  return chk.nonvanishing(ctx, statement, g, region, "checked where disc < 0, where the eigenvalues are nonreal");
}

Verdict check_ratio_line(const CheckContext& ctx, const Rational& c, const std::optional<Box>& k) {
  Check chk(with_params("ratio_line", {{"c", c}}), "Corollary 2");
  if (c < 0 || c > 4) throw std::invalid_argument("c must lie in [0, 4]");
  if (!positive_det(ctx)) return chk.not_applicable("needs D > 0 certified; D is " + ctx.classification.describe());
  chk.claim(det_claim(ctx));
  const auto& jd = ctx.jd;
  if (c == 0) {
    return chk.nonvanishing(ctx, "T != 0 on R^2", jd.trace, Region::whole_plane(),
                            "degenerate case c = 0: needs T of constant sign");
  }
  if (c == 4) {
    return chk.nonvanishing(ctx, "disc != 0 " + region_label(k), jd.disc, region_for(k),
                            "degenerate case c = 4: needs disc of constant sign outside K");
  }
  return chk.nonvanishing(ctx, "T^2 - " + fmt(c) + "*D != 0 " + region_label(k),
                          jd.trace * jd.trace - jd.det.scaled(c), region_for(k));
}

Verdict check_spectral_gap_circle(const CheckContext& ctx, const Rational& u, const std::optional<Box>& k) {
  Check chk(with_params("spectral_gap.circle", {{"u", u}}), "Theorem 6");
  if (u < -1 || u > 1) throw std::invalid_argument("u must lie in [-1, 1]");
  if (!unit_det(ctx)) return chk.not_applicable(unit_det_missing(ctx));
  chk.claim(det_claim(ctx));
  return chk.nonvanishing(ctx, "T != " + fmt(Rational(2) * u) + " " + region_label(k),
                          ctx.jd.trace - BivarPoly(Rational(2) * u), region_for(k),
                          "u + iv on the unit circle is an eigenvalue exactly where T = 2u");
}

Verdict check_spectral_gap_real(const CheckContext& ctx, const Rational& z) {
  Check chk(with_params("spectral_gap.real", {{"z", z}}), "Theorem 6");
  if (z == 0 || z == 1 || z == -1) throw std::invalid_argument("z must not be -1, 0 or 1");
  if (!unit_det(ctx)) return chk.not_applicable(unit_det_missing(ctx));
  chk.claim(det_claim(ctx));
  Rational target = z + Rational(1) / z;
  target.canonicalize();
  std::string note = "z is an eigenvalue exactly where T = z + 1/z";
  if (z > 0) note += "; the gap around z excludes eigenvalues near 0 (Theorem 5)";
  return chk.nonvanishing(ctx, "T != " + fmt(target) + " on R^2", ctx.jd.trace - BivarPoly(target),
                          Region::whole_plane(), note);
}

Verdict check_trace_avoids(const CheckContext& ctx, const Rational& h, const std::optional<Box>& k) {
  Check chk(with_params("trace_avoids", {{"h", h}}), "Corollary 5");
  if (!unit_det(ctx)) return chk.not_applicable(unit_det_missing(ctx));
  chk.claim(det_claim(ctx));
  const bool local = abs(h) <= 2;
  const Region region = local ? region_for(k) : Region::whole_plane();
  return chk.nonvanishing(ctx, "T != " + fmt(h) + " " + (local ? region_label(k) : std::string("on R^2")),
                          ctx.jd.trace - BivarPoly(h), region, local ? "case |h| <= 2" : "case |h| > 2");
}

Verdict check_trace_bounded(const CheckContext& ctx) {
  Check chk("trace_bounded", "Corollary 6");
  if (!unit_det(ctx)) return chk.not_applicable(unit_det_missing(ctx));
  chk.claim(det_claim(ctx));
  const auto bound = one_sided_bound(ctx.jd.trace, ctx.options);
  if (!bound) return chk.unknown("no one-sided bound on T certified");
  const Rational& m = bound->bound;
  const BivarPoly gap = bound->upper ? BivarPoly(m) - ctx.jd.trace : ctx.jd.trace - BivarPoly(m);
  const std::string statement = bound->upper ? fmt(m) + " - T >= 0" : "T - " + fmt(m) + " >= 0";
  chk.claim({statement, gap, Claim::Requirement::nonnegative, Region::whole_plane(), bound->cert});
  const Rational h = bound->upper ? Rational(m + 1) : Rational(m - 1);
  chk.note((bound->upper ? "T <= " : "T >= ") + fmt(m) + " on R^2, so T never takes the value h = " + fmt(h));
  return chk.settle();
}

namespace {

int priority(const std::string& criterion) {
  static const std::vector<std::string> order = {"trace_bounded", "trace_avoids", "spectral_gap", "ratio_line",
                                                 "power_curve"};
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (criterion.rfind(order[i], 0) == 0) return static_cast<int>(i);
  }
  return static_cast<int>(order.size());
}

SpectrumEvidence gather_evidence(const PlanarMap& map, const GridSpec& grid, unsigned threads) {
  const auto samples = sample_grid(map, grid, threads);
  SpectrumEvidence e;
  e.samples = samples.size();
  bool first = true;
  for (const auto& s : samples) {
    if (!s.valid) {
      ++e.invalid;
      continue;
    }
    const auto is_pos_real = [](std::complex<double> l) { return l.imag() == 0.0 && l.real() > 0.0; };
    if (is_pos_real(s.lambda1) || is_pos_real(s.lambda2)) ++e.positive_real;
    const double d = (s.lambda1 * s.lambda2).real();
    if (first) {
      e.min_det = e.max_det = d;
      first = false;
    }
    e.min_det = std::min(e.min_det, d);
    e.max_det = std::max(e.max_det, d);
  }
  return e;
}

FalsifyOptions falsify_options(const CertifyOptions& options) {
  FalsifyOptions f;
  f.seed = options.seed;
  f.budget = options.falsify_budget;
  f.threads = options.positivity.threads;
  return f;
}

}  // namespace

Report certify_all(const MapSpec& map, const CertifyOptions& options) {
  Report r;
  r.map = map;
  r.options = options;
  const PlanarMap pm = PlanarMap::from_spec(map);
  if (map.kind == MapKind::blackbox) {
    const auto start = Clock::now();
    r.evidence = gather_evidence(pm, options.evidence_grid, options.positivity.threads);
    Verdict v;
    v.criterion = "spectrum_sampling";
    v.theorem = "Fessler-Gutierrez (sampled)";
    v.outcome = Outcome::heuristic_only;
    std::ostringstream n;
    n << r.evidence->samples << " samples, " << r.evidence->invalid << " invalid, " << r.evidence->positive_real
      << " with an eigenvalue in (0, inf); no polynomial structure to certify";
    v.notes = n.str();
    v.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    r.verdicts.push_back(v);
    r.outcome = Outcome::heuristic_only;
    const auto found = search_collision(pm, falsify_options(options));
    r.collision = found.witness;
    r.conclusion = r.collision ? "NON-INJECTIVE (witnessed)" : "UNDECIDED (heuristic evidence only)";
    return r;
  }

  const CheckContext ctx = make_context(map.p, map.q, options.positivity);
  r.classification = ctx.classification;
  r.normalized = ctx.normalized;
  r.jd = ctx.jd;
  const auto& sw = options.sweep;
  const auto& k = sw.k;
  r.verdicts.push_back(check_trace_bounded(ctx));
  for (const auto& h : sw.h) r.verdicts.push_back(check_trace_avoids(ctx, h, k));
  for (const auto& u : sw.u) r.verdicts.push_back(check_spectral_gap_circle(ctx, u, k));
  for (const auto& z : sw.z) r.verdicts.push_back(check_spectral_gap_real(ctx, z));
  for (const auto& c : sw.c) r.verdicts.push_back(check_ratio_line(ctx, c, k));
  for (const auto& [a, b] : sw.curves) {
    r.verdicts.push_back(check_power_curve(ctx, a, b, CurveSide::nonnegative_trace, k));
    r.verdicts.push_back(check_power_curve(ctx, a, b, CurveSide::nonpositive_trace, k));
  }
  std::sort(r.verdicts.begin(), r.verdicts.end(),
            [](const Verdict& x, const Verdict& y) { return x.criterion < y.criterion; });
  r.verdicts.erase(std::unique(r.verdicts.begin(), r.verdicts.end(),
                               [](const Verdict& x, const Verdict& y) { return x.criterion == y.criterion; }),
                   r.verdicts.end());

  const Verdict* best = nullptr;
  for (const auto& v : r.verdicts) {
    if (v.outcome != Outcome::proved_injective) continue;
    if (!best || priority(v.criterion) < priority(best->criterion)) best = &v;
  }
  if (best) {
    r.outcome = Outcome::proved_injective;
    r.winner = best->criterion;
    r.conclusion = "INJECTIVE (proved by " + best->criterion + ", " + best->theorem + ")";
    return r;
  }
  r.outcome = Outcome::unknown;
  const auto found = search_collision(pm, falsify_options(options));
  r.collision = found.witness;
  r.conclusion = r.collision ? "NON-INJECTIVE (witnessed)" : "UNDECIDED";
  return r;
}

namespace {

json point_json(const std::pair<Rational, Rational>& p) { return json::array({to_string(p.first), to_string(p.second)}); }

json claim_json(const Claim& c) {
  return {{"statement", c.statement},
          {"poly", c.poly.to_string()},
          {"requirement", to_string(c.requirement)},
          {"region", region_to_json(c.region)},
          {"certificate", certificate_to_json(c.cert)}};
}

json verdict_json(const Verdict& v) {
  json claims = json::array();
  for (const auto& c : v.claims) claims.push_back(claim_json(c));
  json refutation = nullptr;
  if (v.refutation) {
    json pts = json::array();
    for (const auto& p : v.refutation->points) pts.push_back(point_json(p));
    refutation = {{"points", pts}, {"note", v.refutation->note}};
  }
  return {{"criterion", v.criterion}, {"theorem", v.theorem},   {"outcome", to_string(v.outcome)},
          {"claims", claims},         {"refutation", refutation}, {"notes", v.notes}};
}

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

std::string kind_name(Classification::Kind k) {
  switch (k) {
    case Classification::Kind::jacobian_map: return "jacobian_map";
    case Classification::Kind::nonsingular: return "nonsingular";
    case Classification::Kind::indefinite: return "indefinite";
  }
  return "?";
}

std::string point_text(const Point& p) {
  std::ostringstream o;
  o << std::setprecision(17) << "(" << p.x << ", " << p.y << ")";
  return o.str();
}

}  // namespace

json report_to_json(const Report& r) {
  json j;
  j["schema"] = 1;
  json m = {{"name", r.map.name}, {"kind", r.map.kind == MapKind::polynomial ? "polynomial" : "blackbox"}};
  if (r.map.kind == MapKind::polynomial) {
    m["P"] = r.map.p.to_string();
    m["Q"] = r.map.q.to_string();
  } else {
    m["builtin"] = r.map.builtin;
  }
  j["map"] = m;
  const auto& o = r.options;
  json curves = json::array();
  for (const auto& [a, b] : o.sweep.curves) curves.push_back(json::array({to_string(a), to_string(b)}));
  j["settings"] = {{"budget", o.positivity.budget},
                   {"seed", o.seed},
                   {"falsify_budget", o.falsify_budget},
                   {"sweep",
                    {{"c", rationals(o.sweep.c)},
                     {"h", rationals(o.sweep.h)},
                     {"z", rationals(o.sweep.z)},
                     {"u", rationals(o.sweep.u)},
                     {"curves", curves},
                     {"K", o.sweep.k ? box_to_json(*o.sweep.k) : json(nullptr)}}}};
  if (r.map.kind == MapKind::polynomial) {
    j["classification"] = {{"kind", kind_name(r.classification.kind)},
                           {"describe", r.classification.describe()},
                           {"note", r.classification.note}};
    j["normalized"] = r.normalized;
    j["invariants"] = {{"T", r.jd.trace.to_string()}, {"D", r.jd.det.to_string()}, {"disc", r.jd.disc.to_string()}};
  }
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(verdict_json(v));
  j["verdicts"] = verdicts;
  j["outcome"] = to_string(r.outcome);
  j["winner"] = r.winner ? json(*r.winner) : json(nullptr);
  if (r.collision) {
    const auto& w = *r.collision;
    j["collision"] = {{"p", {w.p.x, w.p.y}},
                      {"q", {w.q.x, w.q.y}},
                      {"residual", w.residual},
                      {"separation", w.separation},
                      {"start", w.start}};
  } else {
    j["collision"] = nullptr;
  }
  if (r.evidence) {
    j["evidence"] = {{"samples", r.evidence->samples},
                     {"invalid", r.evidence->invalid},
                     {"positive_real", r.evidence->positive_real},
                     {"min_det", r.evidence->min_det},
                     {"max_det", r.evidence->max_det}};
  } else {
    j["evidence"] = nullptr;
  }
  j["conclusion"] = r.conclusion;
  return j;
}

std::string report_text(const Report& r) {
  std::ostringstream o;
  const auto& opt = r.options;
  o << "map: " << r.map.name << " (" << (r.map.kind == MapKind::polynomial ? "polynomial" : "blackbox") << ")\n";
  if (r.map.kind == MapKind::polynomial) {
    o << "  P = " << r.map.p.to_string() << "\n  Q = " << r.map.q.to_string() << "\n";
  } else {
    o << "  builtin = " << r.map.builtin << "\n";
  }
  o << "settings: budget=" << opt.positivity.budget << " seed=" << opt.seed << " falsify_budget=" << opt.falsify_budget
    << " threads=" << opt.positivity.threads
    << " K=" << (opt.sweep.k ? opt.sweep.k->x.to_string() + "x" + opt.sweep.k->y.to_string() : std::string("auto"))
    << "\n";
  o << "sweep: c=" << rationals(opt.sweep.c).dump() << " h=" << rationals(opt.sweep.h).dump()
    << " z=" << rationals(opt.sweep.z).dump() << " u=" << rationals(opt.sweep.u).dump() << "\n";
  if (r.map.kind == MapKind::polynomial) {
    o << "T = " << r.jd.trace.to_string() << "\nD = " << r.jd.det.to_string() << "\ndisc = " << r.jd.disc.to_string()
      << "\nclassification: " << r.classification.describe();
    if (r.normalized) o << " (Q divided by the constant determinant)";
    if (!r.classification.note.empty()) o << " [" << r.classification.note << "]";
    o << "\n";
  }
  o << "\n";
  for (const auto& v : r.verdicts) {
    o << std::left << std::setw(34) << v.criterion << " " << std::setw(28) << v.theorem << " " << std::setw(17)
      << to_string(v.outcome) << " " << std::fixed << std::setprecision(3) << v.wall_ms << " ms\n";
    o.unsetf(std::ios::floatfield);
    for (const auto& c : v.claims) {
      o << "    certificate: " << c.statement << " [" << to_string(c.cert.kind) << ", " << to_string(c.cert.claimed);
      if (!c.cert.squares.empty() && c.cert.kind == CertKind::perfect_square) {
        o << ", (" << c.cert.squares.front().to_string() << ")^2";
        if (sgn(c.cert.offset) != 0) o << " + " << to_string(c.cert.offset);
      }
      o << "]\n";
    }
    if (!v.notes.empty()) o << "    " << v.notes << "\n";
  }
  o << "\noutcome: " << to_string(r.outcome);
  if (r.winner) {
    const auto it = std::find_if(r.verdicts.begin(), r.verdicts.end(),
                                 [&](const Verdict& v) { return v.criterion == *r.winner; });
    o << " via " << *r.winner << " (" << it->theorem << ")";
  }
  o << "\n";
  if (r.evidence) {
    o << "evidence: " << r.evidence->samples << " samples, " << r.evidence->positive_real
      << " with a positive real eigenvalue, det in [" << r.evidence->min_det << ", " << r.evidence->max_det << "]\n";
  }
  if (r.collision) {
    const auto& w = *r.collision;
    o << std::setprecision(17) << "collision: F(p) = F(q) with p = " << point_text(w.p) << ", q = " << point_text(w.q)
      << ", residual " << w.residual << ", separation " << w.separation << "\n";
  }
  o << "conclusion: " << r.conclusion << "\n";
  return o.str();
}

}  // namespace planar
