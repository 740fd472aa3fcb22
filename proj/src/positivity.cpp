#include "planar/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "bnb.hpp"

namespace planar {

using detail::BranchAndBound;

std::string to_string(Sign s) {
  switch (s) {
    case Sign::positive: return "positive";
    case Sign::negative: return "negative";
    case Sign::nonnegative: return "nonnegative";
    case Sign::nonpositive: return "nonpositive";
    case Sign::nonvanishing: return "nonvanishing";
  }
  return "?";
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::ge0: return ">=0";
    case Relation::le0: return "<=0";
    case Relation::lt0: return "<0";
    case Relation::gt0: return ">0";
  }
  return "?";
}

Sign sign_from_string(const std::string& s) {
  for (Sign v : {Sign::positive, Sign::negative, Sign::nonnegative, Sign::nonpositive, Sign::nonvanishing}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown sign '" + s + "'");
}

Relation relation_from_string(const std::string& s) {
  for (Relation v : {Relation::ge0, Relation::le0, Relation::lt0, Relation::gt0}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown relation '" + s + "'");
}

std::string to_string(CertKind k) {
  switch (k) {
    case CertKind::constant: return "constant";
    case CertKind::even_monomial: return "even_monomial";
    case CertKind::perfect_square: return "perfect_square";
    case CertKind::sos_user: return "sos_user";
    case CertKind::leading_form_radius: return "leading_form_radius";
    case CertKind::bb_tree: return "bb_tree";
    case CertKind::cover: return "cover";
    case CertKind::infeasible: return "infeasible";
  }
  return "?";
}

bool is_strict(Sign s) { return s == Sign::positive || s == Sign::negative || s == Sign::nonvanishing; }

bool contradicts(Sign s, Relation rel) {
  switch (s) {
    case Sign::positive: return rel == Relation::lt0 || rel == Relation::le0;
    case Sign::negative: return rel == Relation::gt0 || rel == Relation::ge0;
    case Sign::nonnegative: return rel == Relation::lt0;
    case Sign::nonpositive: return rel == Relation::gt0;
    case Sign::nonvanishing: return false;
  }
  return false;
}

Box square(double half_width) {
  return {Interval(-half_width, half_width), Interval(-half_width, half_width)};
}

namespace {

std::string box_text(const Box& b) { return b.x.to_string() + " x " + b.y.to_string(); }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string Region::describe() const {
  std::string base;
  switch (kind) {
    case Kind::whole_plane: base = "R^2"; break;
    case Kind::outside_box: base = "outside " + box_text(box); break;
    case Kind::box: base = box_text(box); break;
    case Kind::eventually: base = "outside some compact K"; break;
  }
  for (const auto& c : constraints) base += " where " + c.poly.to_string() + " " + to_string(c.rel);
  return base;
}

namespace {

using Point2 = std::pair<Rational, Rational>;

int sign_of(const Rational& q) { return sgn(q) > 0 ? 1 : (sgn(q) < 0 ? -1 : 0); }

Sign sign_for(int s, bool strict) {
  if (s > 0) return strict ? Sign::positive : Sign::nonnegative;
  return strict ? Sign::negative : Sign::nonpositive;
}

// +1 for positive / nonnegative claims, -1 for negative / nonpositive.
int orientation(Sign s) {
  if (s == Sign::positive || s == Sign::nonnegative) return 1;
  if (s == Sign::negative || s == Sign::nonpositive) return -1;
  return 0;
}

// Deterministic probe points: a small-value grid first (so simple witnesses
// such as (1,0), (-1,0) are found first), then scattered dyadic rationals.
const std::vector<Point2>& probe_points() {
  static const std::vector<Point2> points = [] {
    const std::vector<Rational> v = {Rational(0),     Rational(1),     Rational(-1),   Rational(2),
                                     Rational(-2),    Rational(1, 2),  Rational(-1, 2), Rational(3),
                                     Rational(-3),    Rational(1, 3),  Rational(-1, 3), Rational(5),
                                     Rational(-5),    Rational(10),    Rational(-10),  Rational(100),
                                     Rational(-100),  Rational(1000),  Rational(-1000)};
    std::vector<Point2> out;
    for (std::size_t n = 0; n < v.size(); ++n) {
      for (std::size_t m = 0; m <= n; ++m) {
        out.emplace_back(v[n], v[m]);
        if (m != n) out.emplace_back(v[m], v[n]);
      }
    }
    std::uint64_t state = 0x9E3779B97F4A7C15ULL;
    auto next = [&state] {
      std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      return z ^ (z >> 31);
    };
    for (int k = 0; k < 160; ++k) {
      const long scale = 1L << (next() % 7);
      const long span = 1L << (4 + next() % 8);
      const long a = static_cast<long>(next() % (2 * span + 1)) - span;
      const long b = static_cast<long>(next() % (2 * span + 1)) - span;
      out.emplace_back(Rational(a, scale), Rational(b, scale));
    }
    for (auto& [x, y] : out) {
      x.canonicalize();
      y.canonicalize();
    }
    return out;
  }();
  return points;
}

struct ProbeSummary {
  std::optional<Point2> positive, negative, zero;
};

ProbeSummary probe(const BivarPoly& p) {
  ProbeSummary s;
  for (const auto& pt : probe_points()) {
    const int v = sign_of(evaluate(p, pt.first, pt.second));
    if (v > 0 && !s.positive) s.positive = pt;
    if (v < 0 && !s.negative) s.negative = pt;
    if (v == 0 && !s.zero) s.zero = pt;
    if (s.positive && s.negative && s.zero) break;
  }
  return s;
}

bool satisfies(const std::vector<Constraint>& cons, const Point2& pt) {
  for (const auto& c : cons) {
    const int v = sign_of(evaluate(c.poly, pt.first, pt.second));
    switch (c.rel) {
      case Relation::gt0: if (v <= 0) return false; break;
      case Relation::ge0: if (v < 0) return false; break;
      case Relation::lt0: if (v >= 0) return false; break;
      case Relation::le0: if (v > 0) return false; break;
    }
  }
  return true;
}

// ---- syntactic certificates ------------------------------------------------

bool all_even_positive(const BivarPoly& q) {
  for (const auto& [e, c] : q.terms()) {
    if (e.x % 2 != 0 || e.y % 2 != 0) return false;
    if (!(e == Exponent{0, 0}) && sgn(c) <= 0) return false;
  }
  return sgn(q.constant_term()) >= 0;
}

std::optional<SignCertificate> try_constant(const BivarPoly& p) {
  if (!p.is_constant()) return std::nullopt;
  SignCertificate c;
  c.kind = CertKind::constant;
  c.poly = p;
  const int s = sign_of(p.constant_term());
  c.claimed = s > 0 ? Sign::positive : (s < 0 ? Sign::negative : Sign::nonnegative);
  return c;
}

std::optional<SignCertificate> try_even_monomial(const BivarPoly& p) {
  if (p.is_constant()) return std::nullopt;
  for (int s : {1, -1}) {
    const BivarPoly q = s > 0 ? p : p.negated();
    if (!all_even_positive(q)) continue;
    SignCertificate c;
    c.kind = CertKind::even_monomial;
    c.poly = p;
    c.offset = q.constant_term();
    c.claimed = sign_for(s, sgn(c.offset) > 0);
    return c;
  }
  return std::nullopt;
}

std::optional<SignCertificate> try_perfect_square(const BivarPoly& p) {
  if (p.is_constant()) return std::nullopt;
  std::optional<SignCertificate> weak;
  for (int s : {1, -1}) {
    const BivarPoly q = s > 0 ? p : p.negated();
    const Rational c0 = q.constant_term();
    std::vector<Rational> offsets;
    if (sgn(c0) > 0) offsets.push_back(c0);
    offsets.emplace_back(0);
    for (const auto& o : offsets) {
      auto root = perfect_square_root(q - BivarPoly(o));
      if (!root || root->is_zero()) continue;
      SignCertificate c;
      c.kind = CertKind::perfect_square;
      c.poly = p;
      c.squares = {*root};
      c.offset = o;
      c.claimed = sign_for(s, sgn(o) > 0);
      if (sgn(o) > 0) return c;
      if (!weak) weak = c;
    }
  }
  return weak;
}

std::optional<SignCertificate> try_sos(const BivarPoly& p, const std::vector<SosHint>& hints) {
  for (const auto& h : hints) {
    if (h.squares.empty() || sgn(h.offset) < 0) continue;
    BivarPoly sum(h.offset);
    for (const auto& g : h.squares) sum += multiply(g, g, BivarPoly::kUnlimited);
    for (int s : {1, -1}) {
      if ((s > 0 ? p : p.negated()) != sum) continue;
      SignCertificate c;
      c.kind = CertKind::sos_user;
      c.poly = p;
      c.squares = h.squares;
      c.offset = h.offset;
      c.claimed = sign_for(s, sgn(h.offset) > 0);
      return c;
    }
  }
  return std::nullopt;
}

// ---- leading-form analysis ----------------------------------------------

std::string axes_of(const BivarPoly& p) {
  const bool dx = p.depends_on(Var::x);
  const bool dy = p.depends_on(Var::y);
  if (dx && dy) return "xy";
  if (dx) return "x";
  if (dy) return "y";
  return "";
}

constexpr int kBoundarySamples = 64;

// Largest power of two <= v / 2 (v > 0).
double half_power_of_two(const Rational& v) {
  const double h = round_down(v / 2);
  if (!(h > 0)) return 0.0;
  int ex = 0;
  (void)std::frexp(h, &ex);
  return std::ldexp(1.0, ex - 1);
}

// Orientation s and guaranteed minimum m of s*L on the unit max-norm
// boundary, from exact samples. Empty when L is not definite there.
struct FormSample {
  int sign = 0;
  double form_min = 0.0;
};

std::optional<FormSample> sample_leading_form(const BivarPoly& form, const std::string& axes) {
  std::vector<Point2> pts;
  if (axes == "xy") {
    for (int k = 0; k <= kBoundarySamples; ++k) {
      Rational t(2 * k - kBoundarySamples, kBoundarySamples);
      t.canonicalize();
      pts.emplace_back(Rational(1), t);
      pts.emplace_back(Rational(-1), t);
      pts.emplace_back(t, Rational(1));
      pts.emplace_back(t, Rational(-1));
    }
  } else if (axes == "x") {
    pts = {{Rational(1), Rational(0)}, {Rational(-1), Rational(0)}};
  } else {
    pts = {{Rational(0), Rational(1)}, {Rational(0), Rational(-1)}};
  }
  int s = 0;
  std::optional<Rational> lowest;
  for (const auto& pt : pts) {
    const Rational v = evaluate(form, pt.first, pt.second);
    const int sv = sign_of(v);
    if (sv == 0) return std::nullopt;
    if (s == 0) s = sv;
    if (sv != s) return std::nullopt;
    const Rational mag = abs(v);
    if (!lowest || mag < *lowest) lowest = mag;
  }
  const double m = half_power_of_two(*lowest);
  if (!(m > 0)) return std::nullopt;
  return FormSample{s, m};
}

// Interval proof that s*form >= m on the unit max-norm boundary.
bool prove_form_bound(const BivarPoly& signed_form, const std::string& axes, double m, std::size_t budget) {
  if (axes != "xy") {
    // univariate c*t^d: the boundary is the two points t = +-1
    for (int t : {1, -1}) {
      const Rational v = axes == "x" ? evaluate(signed_form, Rational(t), Rational(0))
                                      : evaluate(signed_form, Rational(0), Rational(t));
      if (v < Rational(m)) return false;
    }
    return true;
  }
  const CompiledPoly f(signed_form);
  std::size_t nodes = 0;
  for (int edge = 0; edge < 4; ++edge) {
    const Interval fixed = Interval::point(edge % 2 == 0 ? 1.0 : -1.0);
    std::vector<Interval> stack = {Interval(-1.0, 1.0)};
    while (!stack.empty()) {
      if (++nodes > budget) return false;
      const Interval t = stack.back();
      stack.pop_back();
      const Interval v = edge < 2 ? f.eval(fixed, t) : f.eval(t, fixed);
      if (v.lo >= m) continue;
      if (t.width() < std::ldexp(1.0, -40)) return false;
      const double mid = t.mid();
      stack.emplace_back(mid, t.hi);
      stack.emplace_back(t.lo, mid);
    }
  }
  return true;
}

// 1 + (sum of |lower-degree coefficients|) / m, rounded up.
double radius_for(const BivarPoly& p, double m) {
  const auto d = static_cast<std::uint32_t>(p.degree());
  Rational s(0);
  for (const auto& [e, c] : p.terms()) {
    if (e.total() < d) s += abs(c);
  }
  return round_up(Rational(1) + s / Rational(m));
}

constexpr std::size_t kFormBudget = 200'000;

std::optional<SignCertificate> leading_form_certificate(const BivarPoly& p, std::string* why) {
  const std::string axes = axes_of(p);
  const BivarPoly form = leading_form(p);
  if (axes != "xy" && form.degree() % 2 != 0) {
    if (why) *why = "odd univariate leading term";
    return std::nullopt;
  }
  auto fs = sample_leading_form(form, axes);
  if (!fs) {
    if (why) *why = "leading form " + form.to_string() + " is not definite";
    return std::nullopt;
  }
  const BivarPoly signed_form = fs->sign > 0 ? form : form.negated();
  if (!prove_form_bound(signed_form, axes, fs->form_min, kFormBudget)) {
    if (why) *why = "interval bound on the leading form failed";
    return std::nullopt;
  }
  SignCertificate c;
  c.kind = CertKind::leading_form_radius;
  c.poly = p;
  c.axes = axes;
  c.form_min = fs->form_min;
  c.radius = radius_for(p, fs->form_min);
  c.claimed = fs->sign > 0 ? Sign::positive : Sign::negative;
  return c;
}

// Closed boxes covering the part of the radius-R core outside the interior of K.
std::vector<Box> core_pieces(const std::optional<Box>& k, double r, const std::string& axes) {
  const Interval core(-r, r);
  const Interval line(-kInf, kInf);
  if (axes == "xy") {
    const Box b{core, core};
    if (!k) return {b};
    const double a = std::max(k->x.lo, -r), bb = std::min(k->x.hi, r);
    const double c = std::max(k->y.lo, -r), d = std::min(k->y.hi, r);
    if (a >= bb || c >= d) return {b};
    std::vector<Box> out;
    if (a > -r) out.push_back({Interval(-r, a), core});
    if (bb < r) out.push_back({Interval(bb, r), core});
    if (c > -r) out.push_back({Interval(a, bb), Interval(-r, c)});
    if (d < r) out.push_back({Interval(a, bb), Interval(d, r)});
    return out;
  }
  // univariate: the core is a strip, unbounded along the unused axis
  const bool along_x = axes == "x";
  auto make = [&](const Interval& used, const Interval& other) {
    return along_x ? Box{used, other} : Box{other, used};
  };
  if (!k) return {make(core, line)};
  const Interval ku = along_x ? k->x : k->y;
  const Interval ko = along_x ? k->y : k->x;
  const double a = std::max(ku.lo, -r), bb = std::min(ku.hi, r);
  if (a >= bb) return {make(core, line)};
  std::vector<Box> out;
  if (a > -r) out.push_back(make(Interval(-r, a), line));
  if (bb < r) out.push_back(make(Interval(bb, r), line));
  out.push_back(make(Interval(a, bb), Interval(-kInf, ko.lo)));
  out.push_back(make(Interval(a, bb), Interval(ko.hi, kInf)));
  return out;
}

bool box_contains_core(const Box& k, double r, const std::string& axes) {
  const bool cx = k.x.lo <= -r && k.x.hi >= r;
  const bool cy = k.y.lo <= -r && k.y.hi >= r;
  if (axes == "xy") return cx && cy;
  return false;  // a strip is never inside a bounded K
}

Sign combine(const std::vector<Sign>& signs) {
  bool pos = false, neg = false;
  for (Sign s : signs) {
    if (s == Sign::positive) pos = true;
    else if (s == Sign::negative) neg = true;
    else pos = neg = true;
  }
  return detail::summarize(pos, neg);
}

struct CoverAttempt {
  std::optional<SignCertificate> cert;
  std::string note;
};

// Certificate over (outside K, or everywhere) ∩ constraints from an outer
// certificate plus branch-and-bound on the remaining core.
CoverAttempt build_cover(const BivarPoly& p, const std::vector<Constraint>& cons, const std::optional<Box>& k,
                         const SignCertificate& outer, int subject, const PositivityOptions& options) {
  CoverAttempt out;
  const double r = outer.radius;
  const auto pieces = core_pieces(k, r, outer.axes);
  BranchAndBound bnb(p, cons);
  SignCertificate inner;
  inner.kind = CertKind::bb_tree;
  inner.poly = p;
  inner.constraints = cons;
  bool pos = false, neg = false;
  if (!pieces.empty() && !(k && box_contains_core(*k, r, outer.axes))) {
    auto res = bnb.run(pieces, options.budget, options.threads);
    if (res.status != BranchAndBound::Status::proved) {
      out.note = res.status == BranchAndBound::Status::stuck ? "branch-and-bound stalled (p vanishes or is tangent to 0)"
                                                               : "branch-and-bound budget exhausted";
      return out;
    }
    inner.boxes = std::move(res.logs);
    pos = res.any_positive;
    neg = res.any_negative;
  }
  inner.claimed = detail::summarize(pos, neg);
  SignCertificate c;
  c.kind = CertKind::cover;
  c.poly = p;
  c.constraints = cons;
  c.excluded = k;
  c.radius = r;
  c.axes = outer.axes;
  c.subject = subject;
  std::vector<Sign> signs;
  if (subject < 0) signs.push_back(outer.claimed);
  if (pos) signs.push_back(Sign::positive);
  if (neg) signs.push_back(Sign::negative);
  c.claimed = signs.empty() ? Sign::nonvanishing : combine(signs);
  c.parts = {outer, inner};
  out.cert = c;
  return out;
}

// If p = a*v + b with v entering linearly, the zero set contains the graph
// v = -b/a over every value of the other coordinate where a != 0. Sampled at
// growing coordinates, the points leave every compact set.
std::optional<Witness> unbounded_zero_family(const BivarPoly& p) {
  if (!p.is_constant() && (!p.depends_on(Var::x) || !p.depends_on(Var::y))) {
    // univariate: a root t0 gives the whole line through it
    const Var used = p.depends_on(Var::x) ? Var::x : Var::y;
    for (const auto& pt : probe_points()) {
      if (sgn(pt.second) != 0) continue;
      const Rational& t0 = pt.first;
      const bool zero = used == Var::x ? sgn(evaluate(p, t0, Rational(0))) == 0 : sgn(evaluate(p, Rational(0), t0)) == 0;
      if (!zero) continue;
      Witness w;
      for (int t = 1; t <= 4; ++t) {
        const Rational o(Integer(1) << (3 * t));
        w.points.emplace_back(used == Var::x ? Point2{t0, o} : Point2{o, t0});
      }
      w.note = std::string("zero set contains the line ") + (used == Var::x ? "x = " : "y = ") + to_string(t0);
      return w;
    }
  }
  for (Var v : {Var::x, Var::y}) {
    if (p.degree_in(v) != 1) continue;
    BivarPoly a, b;
    for (const auto& [e, c] : p.terms()) {
      const std::uint32_t k = v == Var::x ? e.x : e.y;
      if (k == 1) a.add_term(v == Var::x ? Exponent{0, e.y} : Exponent{e.x, 0}, c);
      else b.add_term(e, c);
    }
    Witness w;
    for (int t = 1; t <= 20 && w.points.size() < 4; ++t) {
      const Rational o(Integer(1) << (3 * t));
      const Rational av = v == Var::x ? evaluate(a, Rational(0), o) : evaluate(a, o, Rational(0));
      if (sgn(av) == 0) continue;
      const Rational bv = v == Var::x ? evaluate(b, Rational(0), o) : evaluate(b, o, Rational(0));
      Rational z = -bv / av;
      z.canonicalize();
      w.points.emplace_back(v == Var::x ? Point2{z, o} : Point2{o, z});
    }
    if (w.points.empty()) continue;
    const char name = v == Var::x ? 'x' : 'y';
    std::string graph = "-(" + b.to_string() + ")/(" + a.to_string() + ")";
    if (a.size() == 1) {
      // monomial a: print -b/a as a polynomial when a divides every term
      const auto& [ea, ca] = *a.terms().begin();
      BivarPoly quot;
      bool divides = true;
      for (const auto& [e, c] : b.terms()) {
        if (e.x < ea.x || e.y < ea.y) { divides = false; break; }
        quot.add_term({e.x - ea.x, e.y - ea.y}, -c / ca);
      }
      if (divides) graph = quot.to_string();
    }
    w.note = std::string("zero set contains ") + name + " = " + graph + ", unbounded";
    return w;
  }
  return std::nullopt;
}

bool outside(const Box& k, const Point2& pt) {
  const Rational kx0(k.x.lo), kx1(k.x.hi), ky0(k.y.lo), ky1(k.y.hi);
  return pt.first < kx0 || pt.first > kx1 || pt.second < ky0 || pt.second > ky1;
}

// Opposite signs on the boundary of a square enclosing K: that boundary is a
// connected curve outside K, so p has a zero there.
std::optional<Witness> boundary_sign_change(const BivarPoly& p, const Box& k) {
  double extent = std::max({std::fabs(k.x.lo), std::fabs(k.x.hi), std::fabs(k.y.lo), std::fabs(k.y.hi)});
  double r = 1.0;
  while (r <= extent) r *= 2;
  r *= 2;
  for (int scale = 0; scale < 12; ++scale, r *= 4) {
    std::optional<Point2> pos, neg;
    const Rational rr(r);
    for (int i = 0; i <= 32; ++i) {
      Rational t = rr * Rational(2 * i - 32, 32);
      t.canonicalize();
      for (const Point2& pt : {Point2{rr, t}, Point2{-rr, t}, Point2{t, rr}, Point2{t, -rr}}) {
        const int s = sign_of(evaluate(p, pt.first, pt.second));
        if (s == 0) return Witness{{pt}, "exact zero outside K"};
        if (s > 0 && !pos) pos = pt;
        if (s < 0 && !neg) neg = pt;
      }
      if (pos && neg) {
        return Witness{{*pos, *neg}, "sign change on the boundary of [-" + to_string(rr) + ", " + to_string(rr) +
                                         "]^2, which lies outside K"};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

// ---- public operations ------------------------------------------------------

GlobalSignResult global_sign(const BivarPoly& p, const PositivityOptions& options) {
  using S = GlobalSignResult::Status;
  GlobalSignResult r;
  auto from_cert = [&](const SignCertificate& c) {
    r.cert = c;
    switch (c.claimed) {
      case Sign::positive: r.status = S::positive; break;
      case Sign::negative: r.status = S::negative; break;
      case Sign::nonnegative: r.status = S::nonnegative; break;
      case Sign::nonpositive: r.status = S::nonpositive; break;
      case Sign::nonvanishing: r.status = S::unknown; break;
    }
    return r;
  };
  if (auto c = try_constant(p)) return from_cert(*c);
  std::optional<SignCertificate> weak = try_even_monomial(p);
  if (weak && is_strict(weak->claimed)) return from_cert(*weak);
  if (auto c = try_perfect_square(p)) {
    if (is_strict(c->claimed)) return from_cert(*c);
    if (!weak) weak = c;
  }
  if (weak) {
    // nonnegative with a zero somewhere; the weak certificate is still the answer
    return from_cert(*weak);
  }
  const ProbeSummary ps = probe(p);
  if (ps.positive && ps.negative) {
    r.status = S::indefinite;
    r.witness = Witness{{*ps.positive, *ps.negative}, "opposite signs"};
    return r;
  }
  std::string why;
  if (auto outer = leading_form_certificate(p, &why)) {
    auto cover = build_cover(p, {}, std::nullopt, *outer, -1, options);
    if (cover.cert && is_strict(cover.cert->claimed) && cover.cert->claimed != Sign::nonvanishing) {
      return from_cert(*cover.cert);
    }
    why = cover.note;
  }
  if (auto c = try_sos(p, options.sos_hints)) return from_cert(*c);
  r.status = S::unknown;
  r.note = why;
  return r;
}

EventualSignResult eventual_sign(const BivarPoly& p, const PositivityOptions& options) {
  (void)options;
  if (p.is_zero()) throw std::invalid_argument("eventual_sign of the zero polynomial");
  using S = EventualSignResult::Status;
  EventualSignResult r;
  if (p.is_constant()) {
    r.cert = try_constant(p);
    r.status = sgn(p.constant_term()) > 0 ? S::positive_outside : S::negative_outside;
    r.radius = 0.0;
    return r;
  }
  std::string why;
  auto c = leading_form_certificate(p, &why);
  if (!c) {
    r.note = why;
    return r;
  }
  r.status = c->claimed == Sign::positive ? S::positive_outside : S::negative_outside;
  r.radius = c->radius;
  r.cert = c;
  return r;
}

std::optional<BoundResult> one_sided_bound(const BivarPoly& p, const PositivityOptions& options) {
  const Rational c0 = p.constant_term();
  if (p.is_constant()) {
    BoundResult b;
    b.upper = true;
    b.bound = c0;
    b.cert = *try_constant(BivarPoly(c0) - p);
    return b;
  }
  // syntactic: s*(p - p(0,0)) is a square or an even-monomial sum
  for (bool upper : {true, false}) {
    const BivarPoly gap = upper ? BivarPoly(c0) - p : p - BivarPoly(c0);
    std::optional<SignCertificate> cert = try_even_monomial(gap);
    if (!cert || orientation(cert->claimed) < 0) cert = try_perfect_square(gap);
    if (cert && orientation(cert->claimed) > 0) return BoundResult{upper, c0, *cert};
  }
  // leading form plus branch-and-bound on p - M for M just beyond the sampled extreme
  for (bool upper : {true, false}) {
    std::optional<Rational> extreme;
    for (const auto& pt : probe_points()) {
      if (abs(pt.first) > 10 || abs(pt.second) > 10) continue;
      const Rational v = evaluate(p, pt.first, pt.second);
      if (!extreme || (upper ? v > *extreme : v < *extreme)) extreme = v;
    }
    Integer base;
    if (upper) mpz_cdiv_q(base.get_mpz_t(), extreme->get_num_mpz_t(), extreme->get_den_mpz_t());
    else mpz_fdiv_q(base.get_mpz_t(), extreme->get_num_mpz_t(), extreme->get_den_mpz_t());
    for (int k = 0; k < 4; ++k) {
      const Rational m = upper ? Rational(base + (Integer(1) << k)) : Rational(base - (Integer(1) << k));
      const BivarPoly gap = upper ? BivarPoly(m) - p : p - BivarPoly(m);
      auto gs = global_sign(gap, options);
      if (gs.status == GlobalSignResult::Status::positive && gs.cert) return BoundResult{upper, m, *gs.cert};
      if (gs.status == GlobalSignResult::Status::indefinite) continue;
      if (gs.status == GlobalSignResult::Status::unknown) break;
    }
  }
  return std::nullopt;
}

NonvanishingResult nonvanishing_on(const BivarPoly& p, const Region& region, const PositivityOptions& options) {
  using St = NonvanishingResult::Status;
  NonvanishingResult r;
  const auto& cons = region.constraints;
  const bool constrained = !cons.empty();
  const bool any_k = region.kind == Region::Kind::eventually;
  std::optional<Box> k;
  if (region.kind == Region::Kind::outside_box) k = region.box;

  if (p.is_zero()) {
    r.status = St::refuted;
    r.witness = Witness{{{Rational(0), Rational(0)}}, "zero polynomial"};
    return r;
  }

  // infeasible constraint set
  for (std::size_t i = 0; i < cons.size(); ++i) {
    auto gs = global_sign(cons[i].poly, options);
    if (gs.cert && contradicts(gs.cert->claimed, cons[i].rel)) {
      SignCertificate c;
      c.kind = CertKind::infeasible;
      c.claimed = Sign::nonvanishing;
      c.poly = p;
      c.constraints = cons;
      c.subject = static_cast<int>(i);
      c.parts = {*gs.cert};
      r.status = St::proved;
      r.cert = c;
      r.note = "constraint " + cons[i].poly.to_string() + " " + to_string(cons[i].rel) + " never holds";
      return r;
    }
  }

  if (region.kind == Region::Kind::box) {
    const Box b = region.box;
    {
      // an exact zero refutes; without constraints the box is connected, so
      // a sign change does too
      std::optional<Point2> pos, neg;
      for (int i = 0; i <= 8; ++i) {
        for (int j = 0; j <= 8; ++j) {
          if (!b.x.is_bounded() || !b.y.is_bounded()) break;
          Point2 pt{Rational(b.x.lo) + (Rational(b.x.hi) - Rational(b.x.lo)) * Rational(i, 8),
                    Rational(b.y.lo) + (Rational(b.y.hi) - Rational(b.y.lo)) * Rational(j, 8)};
          pt.first.canonicalize();
          pt.second.canonicalize();
          if (!satisfies(cons, pt)) continue;
          const int s = sign_of(evaluate(p, pt.first, pt.second));
          if (s == 0) {
            r.status = St::refuted;
            r.witness = Witness{{pt}, "exact zero in the box"};
            return r;
          }
          if (s > 0 && !pos) pos = pt;
          if (s < 0 && !neg) neg = pt;
        }
      }
      if (!constrained && pos && neg) {
        r.status = St::refuted;
        r.witness = Witness{{*pos, *neg}, "sign change inside the box"};
        return r;
      }
    }
    BranchAndBound bnb(p, cons);
    auto res = bnb.run({b}, options.budget, options.threads);
    if (res.status == BranchAndBound::Status::proved) {
      SignCertificate c;
      c.kind = CertKind::bb_tree;
      c.poly = p;
      c.constraints = cons;
      c.boxes = std::move(res.logs);
      c.claimed = detail::summarize(res.any_positive, res.any_negative);
      r.status = St::proved;
      r.cert = c;
      return r;
    }
    r.note = res.status == BranchAndBound::Status::stuck ? "branch-and-bound stalled" : "budget exhausted";
    return r;
  }

  // unbounded regions: a global strict sign suffices everywhere
  auto gs = global_sign(p, options);
  if (gs.cert && is_strict(gs.cert->claimed) && gs.cert->claimed != Sign::nonvanishing) {
    r.status = St::proved;
    r.cert = gs.cert;
    return r;
  }

  if (region.kind == Region::Kind::whole_plane && !constrained) {
    if (gs.status == GlobalSignResult::Status::indefinite) {
      r.status = St::refuted;
      r.witness = gs.witness;
      return r;
    }
    const ProbeSummary ps = probe(p);
    if (ps.zero) {
      r.status = St::refuted;
      r.witness = Witness{{*ps.zero}, "exact zero"};
      return r;
    }
  }

  if (!any_k && constrained) {
    for (const auto& pt : probe_points()) {
      if (k && !outside(*k, pt)) continue;
      if (!satisfies(cons, pt) || sign_of(evaluate(p, pt.first, pt.second)) != 0) continue;
      r.status = St::refuted;
      r.witness = Witness{{pt}, "exact zero in the region"};
      return r;
    }
  }

  std::string zero_note;
  if (k && !constrained) {
    // the complement of a box is connected, so opposite signs there force a zero
    std::optional<Point2> pos, neg;
    for (const auto& pt : probe_points()) {
      if (!outside(*k, pt)) continue;
      const int s = sign_of(evaluate(p, pt.first, pt.second));
      if (s == 0) {
        r.status = St::refuted;
        r.witness = Witness{{pt}, "exact zero outside K"};
        return r;
      }
      if (s > 0 && !pos) pos = pt;
      if (s < 0 && !neg) neg = pt;
    }
    if (pos && neg) {
      r.status = St::refuted;
      r.witness = Witness{{*pos, *neg}, "opposite signs outside K, whose complement is connected"};
      return r;
    }
  }
  // refutations valid for the requested region
  std::vector<BivarPoly> zero_sources = {p};
  if (gs.cert && gs.cert->kind == CertKind::perfect_square && sgn(gs.cert->offset) == 0) {
    zero_sources.push_back(gs.cert->squares.front());
  }
  for (const auto& src : zero_sources) {
    auto fam = unbounded_zero_family(src);
    if (!fam) continue;
    std::vector<std::pair<Rational, Rational>> valid;
    for (const auto& pt : fam->points) {
      if (sgn(evaluate(p, pt.first, pt.second)) != 0) continue;
      if (!satisfies(cons, pt)) continue;
      if (k && !outside(*k, pt)) continue;
      valid.push_back(pt);
    }
    if (valid.empty()) continue;
    if (k || !constrained) {
      r.status = St::refuted;
      r.witness = Witness{{valid.front()}, fam->note};
      if (any_k) r.witness->note += "; no compact K avoids it";
      return r;
    }
    zero_note = "zeros far out: " + fam->note;
  }
  if (any_k && !constrained && !p.is_constant() && (!p.depends_on(Var::x) || !p.depends_on(Var::y))) {
    const ProbeSummary ps = probe(p);
    if (ps.positive && ps.negative) {
      // every parallel line far out carries a zero between the two points
      const Rational far(Integer(1) << 20);
      const bool in_x = p.depends_on(Var::x);
      const Point2 a = in_x ? Point2{ps.positive->first, far} : Point2{far, ps.positive->second};
      const Point2 b = in_x ? Point2{ps.negative->first, far} : Point2{far, ps.negative->second};
      r.status = St::refuted;
      r.witness = Witness{{a, b}, std::string("p depends on ") + (in_x ? "x" : "y") +
                                      " only and changes sign, so zeros leave every compact K"};
      return r;
    }
  }
  if (k && !constrained) {
    if (auto w = boundary_sign_change(p, *k)) {
      r.status = St::refuted;
      r.witness = w;
      return r;
    }
  }
  // leading form of p outside a core box, branch-and-bound inside it
  std::string why;
  auto outer = leading_form_certificate(p, &why);
  if (outer) {
    if (any_k && outer->axes == "xy") {
      r.status = St::proved;
      r.cert = outer;
      r.chosen_k = square(outer->radius);
      return r;
    }
    auto cover = build_cover(p, cons, k, *outer, -1, options);
    if (cover.cert) {
      r.status = St::proved;
      r.cert = cover.cert;
      return r;
    }
    why = cover.note;
  }

  // a constraint that fails far out confines the region to a core box
  for (std::size_t i = 0; i < cons.size(); ++i) {
    auto c_outer = cons[i].poly.is_constant() ? std::nullopt : leading_form_certificate(cons[i].poly, nullptr);
    if (!c_outer || !contradicts(c_outer->claimed, cons[i].rel)) continue;
    std::optional<Box> kk = k;
    if (any_k) {
      if (c_outer->axes == "xy") {
        kk = square(c_outer->radius);
        r.chosen_k = kk;
      } else {
        kk.reset();
      }
    }
    auto cover = build_cover(p, cons, kk, *c_outer, static_cast<int>(i), options);
    if (cover.cert) {
      r.status = St::proved;
      r.cert = cover.cert;
      return r;
    }
    why = cover.note;
  }

  if (r.note.empty()) r.note = !zero_note.empty() ? zero_note : (why.empty() ? gs.note : why);
  return r;
}

// ---- verification -----------------------------------------------------------

namespace {

bool verify_impl(const BivarPoly& p, const SignCertificate& c, int depth);

bool implies_whole_plane(const SignCertificate& c) {
  switch (c.kind) {
    case CertKind::constant:
    case CertKind::even_monomial:
    case CertKind::perfect_square:
    case CertKind::sos_user:
      return true;
    case CertKind::cover:
      return !c.excluded && c.constraints.empty() && c.subject < 0;
    default:
      return false;
  }
}

bool squares_identity(const BivarPoly& p, const SignCertificate& c) {
  const int s = orientation(c.claimed);
  if (s == 0 || sgn(c.offset) < 0 || c.squares.empty()) return false;
  if (is_strict(c.claimed) != (sgn(c.offset) > 0)) return false;
  BivarPoly sum(c.offset);
  for (const auto& g : c.squares) sum += multiply(g, g, BivarPoly::kUnlimited);
  return (s > 0 ? p : p.negated()) == sum;
}

bool verify_impl(const BivarPoly& p, const SignCertificate& c, int depth) {
  if (depth > 4 || c.poly != p) return false;
  switch (c.kind) {
    case CertKind::constant: {
      if (!p.is_constant()) return false;
      const int s = sign_of(p.constant_term());
      if (s > 0) return c.claimed == Sign::positive;
      if (s < 0) return c.claimed == Sign::negative;
      return c.claimed == Sign::nonnegative || c.claimed == Sign::nonpositive;
    }
    case CertKind::even_monomial: {
      const int s = orientation(c.claimed);
      if (s == 0 || p.is_constant()) return false;
      const BivarPoly q = s > 0 ? p : p.negated();
      if (!all_even_positive(q) || c.offset != q.constant_term()) return false;
      return is_strict(c.claimed) == (sgn(c.offset) > 0);
    }
    case CertKind::perfect_square: {
      if (c.squares.size() != 1 || c.squares.front().is_zero()) return false;
      if (sgn(c.squares.front().lex_leading().second) <= 0) return false;
      return squares_identity(p, c);
    }
    case CertKind::sos_user:
      return squares_identity(p, c);
    case CertKind::leading_form_radius: {
      if (p.is_constant()) return false;
      const std::string axes = axes_of(p);
      if (c.axes != axes) return false;
      const BivarPoly form = leading_form(p);
      if (axes != "xy" && form.degree() % 2 != 0) return false;
      auto fs = sample_leading_form(form, axes);
      if (!fs || fs->form_min != c.form_min) return false;
      if (c.claimed != (fs->sign > 0 ? Sign::positive : Sign::negative)) return false;
      if (c.radius != radius_for(p, c.form_min)) return false;
      return prove_form_bound(fs->sign > 0 ? form : form.negated(), axes, c.form_min, kFormBudget);
    }
    case CertKind::bb_tree: {
      BranchAndBound bnb(p, c.constraints);
      bool pos = false, neg = false;
      for (const auto& bl : c.boxes) {
        if (!bnb.replay(bl, pos, neg)) return false;
      }
      return c.claimed == detail::summarize(pos, neg);
    }
    case CertKind::cover: {
      if (c.parts.size() != 2) return false;
      const SignCertificate& outer = c.parts[0];
      const SignCertificate& inner = c.parts[1];
      if (outer.kind != CertKind::leading_form_radius) return false;
      if (outer.radius != c.radius || outer.axes != c.axes) return false;
      if (c.excluded && !(c.excluded->x.is_bounded() && c.excluded->y.is_bounded())) return false;
      if (c.subject >= 0) {
        if (static_cast<std::size_t>(c.subject) >= c.constraints.size()) return false;
        const Constraint& k = c.constraints[static_cast<std::size_t>(c.subject)];
        if (!verify_impl(k.poly, outer, depth + 1) || !contradicts(outer.claimed, k.rel)) return false;
      } else {
        if (c.subject != -1 || !verify_impl(p, outer, depth + 1)) return false;
      }
      if (inner.kind != CertKind::bb_tree || inner.constraints != c.constraints) return false;
      const bool skip_core = c.excluded && box_contains_core(*c.excluded, c.radius, c.axes);
      const auto pieces = skip_core ? std::vector<Box>{} : core_pieces(c.excluded, c.radius, c.axes);
      if (inner.boxes.size() != pieces.size()) return false;
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!(inner.boxes[i].box == pieces[i])) return false;
      }
      if (!verify_impl(p, inner, depth + 1)) return false;
      std::vector<Sign> signs;
      if (c.subject < 0) signs.push_back(outer.claimed);
      if (inner.claimed == Sign::positive) signs.push_back(Sign::positive);
      if (inner.claimed == Sign::negative) signs.push_back(Sign::negative);
      if (inner.claimed == Sign::nonvanishing && !inner.boxes.empty()) {
        // inner had both signs, or only constraint-excluded leaves
        bool pos = false, neg = false;
        BranchAndBound bnb(p, inner.constraints);
        for (const auto& bl : inner.boxes) (void)bnb.replay(bl, pos, neg);
        if (pos) signs.push_back(Sign::positive);
        if (neg) signs.push_back(Sign::negative);
      }
      const Sign expect = signs.empty() ? Sign::nonvanishing : combine(signs);
      return c.claimed == expect;
    }
    case CertKind::infeasible: {
      if (c.parts.size() != 1 || c.claimed != Sign::nonvanishing) return false;
      if (c.subject < 0 || static_cast<std::size_t>(c.subject) >= c.constraints.size()) return false;
      const Constraint& k = c.constraints[static_cast<std::size_t>(c.subject)];
      const SignCertificate& sub = c.parts[0];
      if (!implies_whole_plane(sub)) return false;
      return verify_impl(k.poly, sub, depth + 1) && contradicts(sub.claimed, k.rel);
    }
  }
  return false;
}

bool constraints_cover(const std::vector<Constraint>& used, const std::vector<Constraint>& wanted) {
  // fewer constraints means a larger implied region
  for (const auto& c : used) {
    if (std::find(wanted.begin(), wanted.end(), c) == wanted.end()) return false;
  }
  return true;
}

bool bounded_box(const Box& b) { return b.x.is_bounded() && b.y.is_bounded(); }

}  // namespace

bool certificate_covers(const SignCertificate& cert, const Region& region) {
  if (!is_strict(cert.claimed)) return false;
  switch (cert.kind) {
    case CertKind::constant:
    case CertKind::even_monomial:
    case CertKind::perfect_square:
    case CertKind::sos_user:
      return true;
    case CertKind::leading_form_radius: {
      if (cert.axes != "xy") return false;
      const double r = cert.radius;
      if (region.kind == Region::Kind::eventually) return true;
      if (region.kind == Region::Kind::outside_box) {
        return region.box.x.lo <= -r && region.box.x.hi >= r && region.box.y.lo <= -r && region.box.y.hi >= r;
      }
      return false;
    }
    case CertKind::bb_tree:
      return region.kind == Region::Kind::box && cert.boxes.size() == 1 && cert.boxes.front().box == region.box &&
             constraints_cover(cert.constraints, region.constraints);
    case CertKind::cover: {
      if (!constraints_cover(cert.constraints, region.constraints)) return false;
      if (!cert.excluded) return true;
      if (region.kind == Region::Kind::eventually) return bounded_box(*cert.excluded);
      if (region.kind == Region::Kind::outside_box) return *cert.excluded == region.box;
      return false;
    }
    case CertKind::infeasible:
      return constraints_cover(cert.constraints, region.constraints);
  }
  return false;
}

bool certificate_is_global(const SignCertificate& cert) { return implies_whole_plane(cert); }

bool verify_certificate(const BivarPoly& p, const SignCertificate& cert) {
  try {
    return verify_impl(p, cert, 0);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace planar
