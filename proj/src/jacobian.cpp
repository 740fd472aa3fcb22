#include "planar/jacobian.hpp"

#include <cmath>
#include <stdexcept>

namespace planar {

JacobianData jacobian_data(const BivarPoly& p, const BivarPoly& q) {
  JacobianData jd;
  jd.px = differentiate(p, Var::x);
  jd.py = differentiate(p, Var::y);
  jd.qx = differentiate(q, Var::x);
  jd.qy = differentiate(q, Var::y);
  jd.trace = jd.px + jd.qy;
  jd.det = multiply(jd.px, jd.qy, BivarPoly::kUnlimited) - multiply(jd.py, jd.qx, BivarPoly::kUnlimited);
  jd.disc = multiply(jd.trace, jd.trace, BivarPoly::kUnlimited) - jd.det.scaled(Rational(4));
  return jd;
}

JacobianData jacobian_data(const PlanarMap& map) {
  if (!map.is_polynomial()) throw std::invalid_argument("jacobian_data needs a polynomial map");
  return jacobian_data(map.p(), map.q());
}

std::string Classification::describe() const {
  switch (kind) {
    case Kind::jacobian_map:
      return "jacobian_map(" + to_string(det_value) + ")";
    case Kind::nonsingular:
      return std::string("nonsingular (det ") + (det_sign > 0 ? "> 0" : "< 0") + " certified)";
    case Kind::indefinite:
      break;
  }
  return "indefinite";
}

Classification classify(const JacobianData& jd, const PositivityOptions& options) {
  Classification c;
  if (jd.det.is_constant() && !jd.det.is_zero()) {
    c.kind = Classification::Kind::jacobian_map;
    c.det_value = jd.det.constant_term();
    c.det_sign = sgn(c.det_value) > 0 ? 1 : -1;
    SignCertificate cert;
    cert.kind = CertKind::constant;
    cert.claimed = c.det_sign > 0 ? Sign::positive : Sign::negative;
    cert.poly = jd.det;
    c.det_cert = cert;
    return c;
  }
  if (jd.det.is_zero()) {
    c.note = "det is identically zero";
    return c;
  }
  auto gs = global_sign(jd.det, options);
  using S = GlobalSignResult::Status;
  if (gs.status == S::positive || gs.status == S::negative) {
    c.kind = Classification::Kind::nonsingular;
    c.det_sign = gs.status == S::positive ? 1 : -1;
    c.det_cert = gs.cert;
    return c;
  }
  c.note = gs.status == S::indefinite ? "det changes sign" : "sign of det not certified";
  if (!gs.note.empty()) c.note += "; " + gs.note;
  return c;
}

namespace {

EigenPair solve(double trace, double det, double disc) {
  EigenPair e;
  e.disc = disc;
  if (disc < 0) {
    const double re = 0.5 * trace;
    const double im = 0.5 * std::sqrt(-disc);
    e.lambda1 = {re, im};
    e.lambda2 = {re, -im};
    return e;
  }
  if (disc == 0) {
    e.lambda1 = e.lambda2 = {0.5 * trace, 0.0};
    return e;
  }
  // larger-magnitude root first, the other from the product
  const double s = std::sqrt(disc);
  const double big = 0.5 * (trace + std::copysign(s, trace));
  const double small = big != 0.0 ? det / big : 0.0;
  e.lambda1 = {std::max(big, small), 0.0};
  e.lambda2 = {std::min(big, small), 0.0};
  return e;
}

}  // namespace

EigenPair eigen_from_invariants(double trace, double det) {
  if (!std::isfinite(trace) || !std::isfinite(det)) throw std::domain_error("non-finite trace or determinant");
  return solve(trace, det, std::fma(trace, trace, -4.0 * det));
}

EigenPair eigen_at(const Matrix2& m) {
  if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c) || !std::isfinite(m.d)) {
    throw std::domain_error("non-finite Jacobian entry");
  }
  const double trace = m.a + m.d;
  const double det = m.a * m.d - m.b * m.c;
  const double diff = m.a - m.d;
  const double disc = std::fma(diff, diff, 4.0 * m.b * m.c);
  return solve(trace, det, disc);
}

EigenPair eigen_at(const JacobianData& jd, double x, double y) {
  const auto t = evaluate(jd.trace, x, y);
  const auto d = evaluate(jd.det, x, y);
  if (!t.finite || !d.finite) throw std::domain_error("non-finite trace or determinant");
  return eigen_from_invariants(t.value, d.value);
}

}  // namespace planar
