#include "planar/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace planar {

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational rational_from_string(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  std::size_t start = (s[0] == '-') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("bad rational '" + s + "'");
  bool slash = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (slash || i == start || i + 1 == s.size()) throw std::invalid_argument("bad rational '" + s + "'");
      slash = true;
    } else if (c < '0' || c > '9') {
      throw std::invalid_argument("bad rational '" + s + "'");
    }
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  const Integer& num = q.get_num();
  const Integer& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

// mpq_get_d truncates toward zero, so one step outward from the truncated
// value always brackets the exact rational.
double round_down(const Rational& q) {
  double d = q.get_d();
  if (!std::isfinite(d)) return d > 0 ? std::numeric_limits<double>::max() : d;
  if (Rational(d) == q) return d;
  return std::nextafter(d, -std::numeric_limits<double>::infinity());
}

double round_up(const Rational& q) {
  double d = q.get_d();
  if (!std::isfinite(d)) return d < 0 ? -std::numeric_limits<double>::max() : d;
  if (Rational(d) == q) return d;
  return std::nextafter(d, std::numeric_limits<double>::infinity());
}

}  // namespace planar
