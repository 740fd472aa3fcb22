#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace planar {

using Rational = mpq_class;
using Integer = mpz_class;

/// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& q);

/// Parses "p" or "p/q" (optional leading '-'). Throws std::invalid_argument.
Rational rational_from_string(std::string_view text);

/// Exact square root when q is the square of a rational.
std::optional<Rational> rational_sqrt(const Rational& q);

/// Double nearest below / above q (bounds are strict-or-equal, never wrong).
double round_down(const Rational& q);
double round_up(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace planar
