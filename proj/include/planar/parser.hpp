#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "planar/poly.hpp"

namespace planar {

/// Parse failure with a 1-based line/column position into the source text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }
  [[nodiscard]] const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

struct ParseOptions {
  int max_degree = BivarPoly::kDefaultMaxDegree;
};

/// Parses an expression over x and y into canonical form.
///
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := '-' factor | atom ('^' uint)?
///   atom   := 'x' | 'y' | int | '(' expr ')'
///
/// Division is accepted only by a nonzero constant, so `3/2` and `x/4` are
/// rational literals in effect. Unary minus binds looser than '^', so
/// `-x^2` is -(x^2).
BivarPoly parse_poly(std::string_view src, const ParseOptions& options = {});

enum class MapKind { polynomial, blackbox };

struct MapSpec {
  std::string name;
  MapKind kind = MapKind::polynomial;
  std::string p_expr;
  std::string q_expr;
  BivarPoly p;
  BivarPoly q;
  std::string builtin;  // blackbox only
};

/// Parses a map definition file:
///
///   name: <identifier>
///   kind: polynomial | blackbox
///   P = <expr>
///   Q = <expr>              (polynomial)
///   builtin = <identifier>  (blackbox)
///
/// Blank lines and lines starting with '#' are ignored.
MapSpec parse_map(std::string_view src, const ParseOptions& options = {});
MapSpec load_map_file(const std::string& path, const ParseOptions& options = {});

/// Inverse of parse_map for polynomial and blackbox specs.
std::string print_map(const MapSpec& spec);

MapSpec make_polynomial_map(std::string name, const BivarPoly& p, const BivarPoly& q);
MapSpec make_blackbox_map(std::string name, std::string builtin);

}  // namespace planar
