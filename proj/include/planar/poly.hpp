#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planar/interval.hpp"
#include "planar/rational.hpp"

namespace planar {

enum class Var { x, y };

/// Exponent pair (i, j) of the monomial x^i y^j. Ordered lexicographically,
/// x first, which is the monomial order used for square-root extraction.
struct Exponent {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  [[nodiscard]] std::uint32_t total() const { return x + y; }
  auto operator<=>(const Exponent&) const = default;
};

class DegreeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Value of a floating-point evaluation plus an overflow flag.
struct NumericValue {
  double value = 0.0;
  bool finite = true;
};

/// Exact bivariate polynomial over the rationals.
///
/// Terms are kept in canonical form: a map from exponent pair to a nonzero
/// coefficient. Two polynomials are equal iff their term maps are equal.
class BivarPoly {
 public:
  using TermMap = std::map<Exponent, Rational>;
  static constexpr int kDefaultMaxDegree = 64;
  static constexpr int kUnlimited = 1 << 30;

  BivarPoly() = default;
  explicit BivarPoly(const Rational& c);
  explicit BivarPoly(long c) : BivarPoly(Rational(c)) {}

  static BivarPoly monomial(const Rational& c, std::uint32_t i, std::uint32_t j);
  static BivarPoly variable(Var v);

  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  /// Total degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const;
  [[nodiscard]] int degree_in(Var v) const;
  [[nodiscard]] bool depends_on(Var v) const { return degree_in(v) > 0; }
  [[nodiscard]] Rational coefficient(std::uint32_t i, std::uint32_t j) const;
  [[nodiscard]] Rational constant_term() const { return coefficient(0, 0); }
  /// Largest exponent in lex order (x first). Precondition: nonzero.
  [[nodiscard]] std::pair<Exponent, Rational> lex_leading() const;

  BivarPoly& operator+=(const BivarPoly& o);
  BivarPoly& operator-=(const BivarPoly& o);
  /// Adds c * x^i y^j in place.
  void add_term(const Exponent& e, const Rational& c);

  [[nodiscard]] BivarPoly scaled(const Rational& c) const;
  [[nodiscard]] BivarPoly negated() const { return scaled(Rational(-1)); }

  /// Canonical text in the map-file expression grammar, terms ascending by
  /// total degree and, within a degree, descending in the x exponent.
  [[nodiscard]] std::string to_string() const;

  bool operator==(const BivarPoly&) const = default;

 private:
  TermMap terms_;
};

BivarPoly operator+(BivarPoly a, const BivarPoly& b);
BivarPoly operator-(BivarPoly a, const BivarPoly& b);
BivarPoly operator-(const BivarPoly& a);
/// Product bounded by kDefaultMaxDegree.
BivarPoly operator*(const BivarPoly& a, const BivarPoly& b);

/// Throws DegreeLimitError when the product's total degree exceeds max_degree.
BivarPoly multiply(const BivarPoly& a, const BivarPoly& b, int max_degree = BivarPoly::kDefaultMaxDegree);
BivarPoly power(const BivarPoly& p, unsigned n, int max_degree = BivarPoly::kDefaultMaxDegree);

BivarPoly differentiate(const BivarPoly& p, Var v);

Rational evaluate(const BivarPoly& p, const Rational& x, const Rational& y);
NumericValue evaluate(const BivarPoly& p, double x, double y);

/// Enclosure of the range of p over bx × by. An unbounded side is accepted
/// only for a variable p does not depend on; anything else throws
/// std::invalid_argument.
Interval interval_eval(const BivarPoly& p, const Interval& bx, const Interval& by);

/// Coefficients converted once to doubles and enclosing intervals, for the
/// hot loops (falsifier sampling, branch-and-bound).
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const BivarPoly& p);

  [[nodiscard]] double eval(double x, double y) const;
  /// Same contract as interval_eval.
  [[nodiscard]] Interval eval(const Interval& bx, const Interval& by) const;
  [[nodiscard]] bool depends_on(Var v) const { return v == Var::x ? deg_x_ > 0 : deg_y_ > 0; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

 private:
  struct Term {
    std::uint32_t i;
    std::uint32_t j;
    double value;
    Interval coef;
  };
  std::vector<Term> terms_;  // descending lex order
  std::uint32_t deg_x_ = 0;
  std::uint32_t deg_y_ = 0;
};

/// Enclosures of a^0 .. a^n, tight for even powers of sign-straddling a.
std::vector<Interval> power_table(const Interval& a, unsigned n);

/// g with g² = p exactly and positive lex-leading coefficient, if one exists.
std::optional<BivarPoly> perfect_square_root(const BivarPoly& p);

/// Top-degree homogeneous component. Throws std::invalid_argument on zero.
BivarPoly leading_form(const BivarPoly& p);

}  // namespace planar
