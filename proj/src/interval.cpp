#include "planar/interval.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace planar {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double v) { return std::isnan(v) ? -kInf : std::nextafter(v, -kInf); }
double up(double v) { return std::isnan(v) ? kInf : std::nextafter(v, kInf); }
}  // namespace

Interval::Interval(double l, double h) : lo(l), hi(h) {
  if (!(l <= h)) throw std::invalid_argument("interval with lo > hi");
}

Interval Interval::enclose(const Rational& q) {
  double lo = round_down(q);
  double hi = round_up(q);
  return {lo, hi};
}

Interval Interval::entire() { return {-kInf, kInf}; }

double Interval::mid() const {
  if (!is_bounded()) return 0.0;
  return lo + 0.5 * (hi - lo);
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '[' << lo << ", " << hi << ']';
  return os.str();
}

// Exact results (common for small integers) are kept as-is; TwoSum gives the
// exact rounding error of a + b whenever no overflow occurs.
namespace {
bool sum_is_exact(double a, double b, double s) {
  if (!std::isfinite(s)) return false;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return err == 0.0;
}

// fma exposes the product error unless it falls below the subnormal range.
bool product_is_exact(double a, double b, double p) {
  if (!std::isfinite(p) || std::fabs(p) < 1e-280) return false;
  return std::fma(a, b, -p) == 0.0;
}
}  // namespace

double add_down(double a, double b) {
  double s = a + b;
  if (std::isinf(a) || std::isinf(b)) return s;
  return sum_is_exact(a, b, s) ? s : down(s);
}

double add_up(double a, double b) {
  double s = a + b;
  if (std::isinf(a) || std::isinf(b)) return s;
  return sum_is_exact(a, b, s) ? s : up(s);
}

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (std::isinf(a) || std::isinf(b)) return p;
  if (product_is_exact(a, b, p)) return p;
  return down(p);
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = a * b;
  if (std::isinf(a) || std::isinf(b)) return p;
  if (product_is_exact(a, b, p)) return p;
  return up(p);
}

Interval operator+(const Interval& a, const Interval& b) {
  return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)};
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  double lo = std::min({mul_down(a.lo, b.lo), mul_down(a.lo, b.hi), mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)});
  double hi = std::max({mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)});
  return {lo, hi};
}

namespace {
// Bounds on v^n for v >= 0.
double pow_down(double v, unsigned n) {
  double r = 1.0;
  for (unsigned i = 0; i < n; ++i) r = mul_down(r, v);
  return std::max(r, 0.0);
}
double pow_up(double v, unsigned n) {
  double r = 1.0;
  for (unsigned i = 0; i < n; ++i) r = mul_up(r, v);
  return r;
}
}  // namespace

Interval pow(const Interval& a, unsigned n) {
  if (n == 0) return Interval::point(1.0);
  if (n == 1) return a;
  if (n % 2 == 1) {
    // odd powers are monotone
    double lo = a.lo >= 0 ? pow_down(a.lo, n) : -pow_up(-a.lo, n);
    double hi = a.hi >= 0 ? pow_up(a.hi, n) : -pow_down(-a.hi, n);
    return {lo, hi};
  }
  if (a.lo >= 0) return {pow_down(a.lo, n), pow_up(a.hi, n)};
  if (a.hi <= 0) return {pow_down(-a.hi, n), pow_up(-a.lo, n)};
  return {0.0, pow_up(std::max(-a.lo, a.hi), n)};
}

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

bool intersect(const Interval& a, const Interval& b, Interval& out) {
  double lo = std::max(a.lo, b.lo);
  double hi = std::min(a.hi, b.hi);
  if (lo > hi) return false;
  out = Interval(lo, hi);
  return true;
}

}  // namespace planar
