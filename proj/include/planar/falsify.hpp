#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "planar/planar_map.hpp"

namespace planar {

/// p != q with F(p) = F(q) up to `residual`; oriented so q.x >= p.x.
struct CollisionWitness {
  Point p;
  Point q;
  double residual = 0.0;    // |F(p) - F(q)|, exact for polynomial maps
  double separation = 0.0;  // |p - q|
  std::size_t start = 0;    // multistart index that produced it
};

struct FalsifyOptions {
  std::uint64_t seed = 1;
  std::size_t budget = 100'000;  // map evaluations, Jacobians included
  double sep_min = 1e-2;
  double residual_tol = 1e-8;
  double penalty_weight = 1e3;
  unsigned threads = 1;
};

struct FalsifyResult {
  std::optional<CollisionWitness> witness;
  std::size_t evaluations = 0;
  std::size_t starts = 0;
};

/// Seeded multistart collision search. Start k draws p and q uniformly in
/// [-2^j, 2^j]^2 with j = k % 8 + 1, runs Nelder-Mead on the penalised
/// squared residual, then a damped minimum-norm Gauss-Newton polish on
/// F(p) - F(q) = 0. The outcome depends only on the map, seed, budget and
/// tolerances.
FalsifyResult search_collision(const PlanarMap& map, const FalsifyOptions& options = {});

/// Direct re-evaluation of the witness conditions. Polynomial maps are
/// evaluated exactly at the witness points and the partner must survive an
/// exact Newton refinement; black-box residuals count only when rounding
/// noise in F is well below residual_tol.
bool validate_witness(const PlanarMap& map, const CollisionWitness& w, double sep_min, double residual_tol);

}  // namespace planar
