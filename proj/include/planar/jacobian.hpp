#pragma once

#include <complex>
#include <optional>
#include <string>

#include "planar/planar_map.hpp"
#include "planar/poly.hpp"
#include "planar/positivity.hpp"

namespace planar {

/// Exact Jacobian invariants of a polynomial map.
struct JacobianData {
  BivarPoly px, py, qx, qy;
  BivarPoly trace;  // px + qy
  BivarPoly det;    // px*qy - py*qx
  BivarPoly disc;   // trace^2 - 4*det
};

JacobianData jacobian_data(const BivarPoly& p, const BivarPoly& q);
JacobianData jacobian_data(const PlanarMap& map);

struct Classification {
  enum class Kind { jacobian_map, nonsingular, indefinite };
  Kind kind = Kind::indefinite;
  Rational det_value;  // jacobian_map only
  int det_sign = 0;    // +1 / -1 when the sign of det is certified, else 0
  std::optional<SignCertificate> det_cert;
  std::string note;

  [[nodiscard]] std::string describe() const;
};

/// jacobian_map(d) iff det is the constant d != 0; otherwise a certified
/// fixed sign of det makes the map nonsingular.
Classification classify(const JacobianData& jd, const PositivityOptions& options = {});

/// Eigenvalues ordered by branch: for a conjugate pair lambda1 has Im >= 0;
/// for real roots lambda1 is the larger, so Re(lambda1) >= 0 >= Re(lambda2)
/// whenever the roots have opposite signs.
struct EigenPair {
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  double disc = 0.0;
};

/// Roots of l^2 - trace*l + det. Throws std::domain_error on non-finite input.
EigenPair eigen_from_invariants(double trace, double det);
/// Uses disc = (a - d)^2 + 4bc, which avoids forming trace^2 - 4 det.
EigenPair eigen_at(const Matrix2& m);
EigenPair eigen_at(const JacobianData& jd, double x, double y);

}  // namespace planar
