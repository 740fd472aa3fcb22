#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "planar/parser.hpp"
#include "planar/poly.hpp"

namespace planar {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Row-major 2x2 real matrix [[a, b], [c, d]].
struct Matrix2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

using MapFunction = std::function<std::array<double, 2>(double, double)>;

/// F = (P, Q), either exact polynomial components or a numeric black box.
class PlanarMap {
 public:
  static PlanarMap polynomial(std::string name, BivarPoly p, BivarPoly q);
  static PlanarMap blackbox(std::string name, MapFunction f);
  /// Resolves blackbox specs through the builtin registry; throws
  /// std::invalid_argument for an unknown builtin.
  static PlanarMap from_spec(const MapSpec& spec);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] bool is_polynomial() const { return polynomial_; }
  [[nodiscard]] const BivarPoly& p() const { return p_; }
  [[nodiscard]] const BivarPoly& q() const { return q_; }

  [[nodiscard]] std::array<double, 2> operator()(double x, double y) const;
  /// Exact derivative polynomials for polynomial maps; central differences
  /// with step 1e-6 * max(1, |coordinate|) for black boxes.
  [[nodiscard]] Matrix2 jacobian(double x, double y) const;

 private:
  std::string name_;
  bool polynomial_ = false;
  BivarPoly p_, q_;
  CompiledPoly cp_, cq_, cpx_, cpy_, cqx_, cqy_;
  MapFunction f_;
};

/// Names accepted by `builtin = ...` in blackbox map files.
std::vector<std::string> builtin_names();

}  // namespace planar
