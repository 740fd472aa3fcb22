#include "planar/planar_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace planar {

namespace {

struct Builtin {
  const char* name;
  MapFunction f;
};

const std::vector<Builtin>& registry() {
  static const std::vector<Builtin> entries = {
      // locally invertible everywhere, 2π-periodic in x
      {"exp_spiral", [](double x, double y) -> std::array<double, 2> {
         const double r = std::exp(y);
         return {r * std::cos(x), r * std::sin(x)};
       }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& b : registry()) names.emplace_back(b.name);
  return names;
}

PlanarMap PlanarMap::polynomial(std::string name, BivarPoly p, BivarPoly q) {
  PlanarMap m;
  m.name_ = std::move(name);
  m.polynomial_ = true;
  m.cp_ = CompiledPoly(p);
  m.cq_ = CompiledPoly(q);
  m.cpx_ = CompiledPoly(differentiate(p, Var::x));
  m.cpy_ = CompiledPoly(differentiate(p, Var::y));
  m.cqx_ = CompiledPoly(differentiate(q, Var::x));
  m.cqy_ = CompiledPoly(differentiate(q, Var::y));
  m.p_ = std::move(p);
  m.q_ = std::move(q);
  return m;
}

PlanarMap PlanarMap::blackbox(std::string name, MapFunction f) {
  PlanarMap m;
  m.name_ = std::move(name);
  m.polynomial_ = false;
  m.f_ = std::move(f);
  return m;
}

PlanarMap PlanarMap::from_spec(const MapSpec& spec) {
  if (spec.kind == MapKind::polynomial) return polynomial(spec.name, spec.p, spec.q);
  for (const auto& b : registry()) {
    if (spec.builtin == b.name) return blackbox(spec.name, b.f);
  }
  throw std::invalid_argument("unknown builtin map '" + spec.builtin + "'");
}

std::array<double, 2> PlanarMap::operator()(double x, double y) const {
  if (polynomial_) return {cp_.eval(x, y), cq_.eval(x, y)};
  return f_(x, y);
}

Matrix2 PlanarMap::jacobian(double x, double y) const {
  if (polynomial_) return {cpx_.eval(x, y), cpy_.eval(x, y), cqx_.eval(x, y), cqy_.eval(x, y)};
  const double hx = 1e-6 * std::max(1.0, std::fabs(x));
  const double hy = 1e-6 * std::max(1.0, std::fabs(y));
  const auto fxp = f_(x + hx, y);
  const auto fxm = f_(x - hx, y);
  const auto fyp = f_(x, y + hy);
  const auto fym = f_(x, y - hy);
  // divide by the step actually realised in floating point
  const double dx = (x + hx) - (x - hx);
  const double dy = (y + hy) - (y - hy);
  return {(fxp[0] - fxm[0]) / dx, (fyp[0] - fym[0]) / dy, (fxp[1] - fxm[1]) / dx, (fyp[1] - fym[1]) / dy};
}

}  // namespace planar
