#include "planar/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace planar {

BivarPoly::BivarPoly(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace(Exponent{0, 0}, c);
}

BivarPoly BivarPoly::monomial(const Rational& c, std::uint32_t i, std::uint32_t j) {
  BivarPoly p;
  if (sgn(c) != 0) p.terms_.emplace(Exponent{i, j}, c);
  return p;
}

BivarPoly BivarPoly::variable(Var v) {
  return v == Var::x ? monomial(Rational(1), 1, 0) : monomial(Rational(1), 0, 1);
}

bool BivarPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0});
}

int BivarPoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e.total()));
  return d;
}

int BivarPoly::degree_in(Var v) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(v == Var::x ? e.x : e.y));
  return d;
}

Rational BivarPoly::coefficient(std::uint32_t i, std::uint32_t j) const {
  auto it = terms_.find(Exponent{i, j});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::pair<Exponent, Rational> BivarPoly::lex_leading() const {
  if (terms_.empty()) throw std::invalid_argument("lex_leading of zero polynomial");
  auto it = terms_.rbegin();
  return {it->first, it->second};
}

void BivarPoly::add_term(const Exponent& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

BivarPoly& BivarPoly::operator+=(const BivarPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

BivarPoly& BivarPoly::operator-=(const BivarPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

BivarPoly BivarPoly::scaled(const Rational& c) const {
  BivarPoly r;
  if (sgn(c) == 0) return r;
  for (const auto& [e, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), e, v * c);
  return r;
}

std::string BivarPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponent, Rational>> order(terms_.begin(), terms_.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first.total() != b.first.total()) return a.first.total() < b.first.total();
    return a.first.x > b.first.x;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : order) {
    bool negative = sgn(c) < 0;
    Rational mag = abs(c);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool unit = mag == 1;
    bool has_vars = e.x > 0 || e.y > 0;
    bool need_star = false;
    if (!unit || !has_vars) {
      os << planar::to_string(mag);
      need_star = true;
    }
    auto emit = [&](char name, std::uint32_t k) {
      if (k == 0) return;
      if (need_star) os << '*';
      os << name;
      if (k > 1) os << '^' << k;
      need_star = true;
    };
    emit('x', e.x);
    emit('y', e.y);
  }
  return os.str();
}

BivarPoly operator+(BivarPoly a, const BivarPoly& b) { return a += b; }
BivarPoly operator-(BivarPoly a, const BivarPoly& b) { return a -= b; }
BivarPoly operator-(const BivarPoly& a) { return a.negated(); }
BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) { return multiply(a, b); }

BivarPoly multiply(const BivarPoly& a, const BivarPoly& b, int max_degree) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.degree() + b.degree() > max_degree) {
    throw DegreeLimitError("product degree " + std::to_string(a.degree() + b.degree()) +
                           " exceeds the limit " + std::to_string(max_degree));
  }
  BivarPoly r;
  Rational prod;
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      prod = ca * cb;
      r.add_term(Exponent{ea.x + eb.x, ea.y + eb.y}, prod);
    }
  }
  return r;
}

BivarPoly power(const BivarPoly& p, unsigned n, int max_degree) {
  if (n == 0) return BivarPoly(Rational(1));
  if (p.is_zero()) return {};
  if (static_cast<long long>(p.degree()) * n > max_degree) {
    throw DegreeLimitError("power degree " + std::to_string(static_cast<long long>(p.degree()) * n) +
                           " exceeds the limit " + std::to_string(max_degree));
  }
  BivarPoly result(Rational(1));
  BivarPoly base = p;
  while (true) {
    if (n & 1U) result = multiply(result, base, max_degree);
    n >>= 1U;
    if (n == 0) break;
    base = multiply(base, base, BivarPoly::kUnlimited);
  }
  return result;
}

BivarPoly differentiate(const BivarPoly& p, Var v) {
  BivarPoly r;
  for (const auto& [e, c] : p.terms()) {
    std::uint32_t k = v == Var::x ? e.x : e.y;
    if (k == 0) continue;
    Exponent d = v == Var::x ? Exponent{e.x - 1, e.y} : Exponent{e.x, e.y - 1};
    r.add_term(d, c * k);
  }
  return r;
}

namespace {

// Horner in x over rows, each row a Horner polynomial in y.
template <typename T, typename Mul, typename Pow>
T horner(const BivarPoly& p, const T& x, const T& y, const T& zero, Mul to_value, Pow pw) {
  const auto& terms = p.terms();
  if (terms.empty()) return zero;
  T acc = zero;
  bool started = false;
  std::uint32_t prev_i = 0;
  auto it = terms.rbegin();
  while (it != terms.rend()) {
    std::uint32_t i = it->first.x;
    // row: all terms with x exponent i, visited in descending j
    T row = zero;
    std::uint32_t prev_j = it->first.y;
    bool row_started = false;
    while (it != terms.rend() && it->first.x == i) {
      std::uint32_t j = it->first.y;
      if (row_started) row = row * pw(y, prev_j - j);
      row = row + to_value(it->second);
      row_started = true;
      prev_j = j;
      ++it;
    }
    row = row * pw(y, prev_j);
    if (started) acc = acc * pw(x, prev_i - i);
    acc = acc + row;
    started = true;
    prev_i = i;
  }
  return acc * pw(x, prev_i);
}

}  // namespace

Rational evaluate(const BivarPoly& p, const Rational& x, const Rational& y) {
  auto pw = [](const Rational& b, std::uint32_t k) {
    Rational r(1);
    for (std::uint32_t i = 0; i < k; ++i) r *= b;
    return r;
  };
  return horner<Rational>(p, x, y, Rational(0), [](const Rational& c) { return c; }, pw);
}

NumericValue evaluate(const BivarPoly& p, double x, double y) {
  auto pw = [](double b, std::uint32_t k) {
    double r = 1.0;
    for (std::uint32_t i = 0; i < k; ++i) r *= b;
    return r;
  };
  double v = horner<double>(p, x, y, 0.0, [](const Rational& c) { return c.get_d(); }, pw);
  return {v, std::isfinite(v)};
}

std::vector<Interval> power_table(const Interval& a, unsigned n) {
  std::vector<Interval> out(n + 1);
  out[0] = Interval::point(1.0);
  if (n == 0) return out;
  const double alo = std::fabs(a.lo);
  const double ahi = std::fabs(a.hi);
  double dlo = 1.0, ulo = 1.0, dhi = 1.0, uhi = 1.0;  // bounds on |lo|^k, |hi|^k
  for (unsigned k = 1; k <= n; ++k) {
    dlo = std::max(mul_down(dlo, alo), 0.0);
    ulo = mul_up(ulo, alo);
    dhi = std::max(mul_down(dhi, ahi), 0.0);
    uhi = mul_up(uhi, ahi);
    if (k % 2 == 1) {
      double lower = a.lo >= 0 ? dlo : -ulo;
      double upper = a.hi >= 0 ? uhi : -dhi;
      out[k] = Interval(lower, upper);
    } else if (a.lo >= 0) {
      out[k] = Interval(dlo, uhi);
    } else if (a.hi <= 0) {
      out[k] = Interval(dhi, ulo);
    } else {
      out[k] = Interval(0.0, std::max(ulo, uhi));
    }
  }
  return out;
}

CompiledPoly::CompiledPoly(const BivarPoly& p) {
  terms_.reserve(p.size());
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    terms_.push_back(Term{it->first.x, it->first.y, it->second.get_d(), Interval::enclose(it->second)});
    deg_x_ = std::max(deg_x_, it->first.x);
    deg_y_ = std::max(deg_y_, it->first.y);
  }
}

double CompiledPoly::eval(double x, double y) const {
  // Horner over x, rows in y; terms are stored in descending lex order.
  double acc = 0.0;
  std::size_t k = 0;
  bool started = false;
  std::uint32_t prev_i = 0;
  auto ipow = [](double b, std::uint32_t e) {
    double r = 1.0;
    for (std::uint32_t t = 0; t < e; ++t) r *= b;
    return r;
  };
  while (k < terms_.size()) {
    const std::uint32_t i = terms_[k].i;
    double row = 0.0;
    std::uint32_t prev_j = terms_[k].j;
    bool row_started = false;
    while (k < terms_.size() && terms_[k].i == i) {
      if (row_started) row *= ipow(y, prev_j - terms_[k].j);
      row += terms_[k].value;
      row_started = true;
      prev_j = terms_[k].j;
      ++k;
    }
    row *= ipow(y, prev_j);
    if (started) acc *= ipow(x, prev_i - i);
    acc += row;
    started = true;
    prev_i = i;
  }
  return started ? acc * ipow(x, prev_i) : 0.0;
}

Interval CompiledPoly::eval(const Interval& bx, const Interval& by) const {
  if (terms_.empty()) return Interval::point(0.0);
  if ((deg_x_ > 0 && !bx.is_bounded()) || (deg_y_ > 0 && !by.is_bounded())) {
    throw std::invalid_argument("interval_eval: unbounded side for a variable the polynomial depends on");
  }
  const auto xp = power_table(bx, deg_x_);
  const auto yp = power_table(by, deg_y_);
  Interval sum = Interval::point(0.0);
  for (const auto& t : terms_) {
    Interval term = t.coef;
    if (t.i > 0) term = term * xp[t.i];
    if (t.j > 0) term = term * yp[t.j];
    sum = sum + term;
  }
  return sum;
}

Interval interval_eval(const BivarPoly& p, const Interval& bx, const Interval& by) {
  return CompiledPoly(p).eval(bx, by);
}

std::optional<BivarPoly> perfect_square_root(const BivarPoly& p) {
  if (p.is_zero()) return BivarPoly{};
  auto [lead_exp, lead_coef] = p.lex_leading();
  if (lead_exp.x % 2 != 0 || lead_exp.y % 2 != 0) return std::nullopt;
  auto root_coef = rational_sqrt(lead_coef);
  if (!root_coef) return std::nullopt;
  const Exponent g_lead{lead_exp.x / 2, lead_exp.y / 2};
  const Rational two_lead = 2 * *root_coef;
  const int half_degree = p.degree() / 2;
  if (p.degree() % 2 != 0) return std::nullopt;

  BivarPoly g = BivarPoly::monomial(*root_coef, g_lead.x, g_lead.y);
  BivarPoly rem = p - multiply(g, g, BivarPoly::kUnlimited);
  Exponent last = g_lead;
  while (!rem.is_zero()) {
    auto [e, c] = rem.lex_leading();
    if (e.x < g_lead.x || e.y < g_lead.y) return std::nullopt;
    Exponent t_exp{e.x - g_lead.x, e.y - g_lead.y};
    if (!(t_exp < last) || static_cast<int>(t_exp.total()) > half_degree) return std::nullopt;
    Rational t_coef = c / two_lead;
    BivarPoly t = BivarPoly::monomial(t_coef, t_exp.x, t_exp.y);
    // (g + t)^2 - g^2 = 2 g t + t^2
    BivarPoly delta = multiply(g, t, BivarPoly::kUnlimited).scaled(Rational(2)) + multiply(t, t, BivarPoly::kUnlimited);
    rem -= delta;
    g += t;
    last = t_exp;
  }
  return g;
}

BivarPoly leading_form(const BivarPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("leading_form of the zero polynomial");
  const auto d = static_cast<std::uint32_t>(p.degree());
  BivarPoly r;
  for (const auto& [e, c] : p.terms()) {
    if (e.total() == d) r.add_term(e, c);
  }
  return r;
}

}  // namespace planar
