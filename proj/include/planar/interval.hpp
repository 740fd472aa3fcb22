#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "planar/rational.hpp"

namespace planar {

/// Closed interval of doubles with outward-rounded arithmetic.
///
/// Every operation computes the round-to-nearest result and then steps one
/// ulp outward with nextafter. Round-to-nearest is within half an ulp of the
/// exact value, so the widened endpoints always bracket the true result.
/// Endpoints may be infinite; callers are responsible for never forming
/// 0 * inf (interval_eval only feeds unbounded sides to variables the
/// polynomial does not depend on).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double l, double h);
  static Interval point(double v) { return {v, v}; }
  static Interval enclose(const Rational& q);
  static Interval entire();

  [[nodiscard]] bool is_bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  [[nodiscard]] bool contains(double v) const { return lo <= v && v <= hi; }
  [[nodiscard]] bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
  [[nodiscard]] bool subset_of(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const;

  [[nodiscard]] std::string to_string() const;
};

double add_down(double a, double b);
double add_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval pow(const Interval& a, unsigned n);
Interval hull(const Interval& a, const Interval& b);
/// Empty intersections are reported by returning false.
bool intersect(const Interval& a, const Interval& b, Interval& out);

}  // namespace planar
