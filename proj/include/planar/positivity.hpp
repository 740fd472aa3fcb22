#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "planar/interval.hpp"
#include "planar/poly.hpp"

namespace planar {

enum class Sign { positive, negative, nonnegative, nonpositive, nonvanishing };
enum class Relation { ge0, le0, lt0, gt0 };

std::string to_string(Sign s);
std::string to_string(Relation r);
Sign sign_from_string(const std::string& s);
Relation relation_from_string(const std::string& s);

/// True when s forces p != 0 everywhere it is claimed.
bool is_strict(Sign s);
/// True when a polynomial with sign s can never satisfy `poly rel 0`.
bool contradicts(Sign s, Relation rel);

struct Box {
  Interval x;
  Interval y;
  bool operator==(const Box& o) const {
    return x.lo == o.x.lo && x.hi == o.x.hi && y.lo == o.y.lo && y.hi == o.y.hi;
  }
};

Box square(double half_width);

struct Constraint {
  BivarPoly poly;
  Relation rel = Relation::ge0;
  bool operator==(const Constraint&) const = default;
};

/// Where a sign condition is required.
///
/// `eventually` means "outside some compact set": the certifier is free to
/// choose the compact set. Constraints restrict any base region to the
/// points where every `poly rel 0` holds.
struct Region {
  enum class Kind { whole_plane, outside_box, box, eventually };
  Kind kind = Kind::whole_plane;
  Box box;  // K for outside_box, the box itself for box
  std::vector<Constraint> constraints;

  static Region whole_plane() { return {}; }
  static Region outside(const Box& k) { return {Kind::outside_box, k, {}}; }
  static Region inside(const Box& b) { return {Kind::box, b, {}}; }
  static Region eventually() { return {Kind::eventually, {}, {}}; }
  [[nodiscard]] Region with(Constraint c) const {
    Region r = *this;
    r.constraints.push_back(std::move(c));
    return r;
  }
  [[nodiscard]] std::string describe() const;
};

enum class CertKind {
  constant,
  even_monomial,
  perfect_square,
  sos_user,
  leading_form_radius,
  bb_tree,
  cover,
  infeasible,
};

std::string to_string(CertKind k);

/// One root box of a branch-and-bound proof and its preorder decision log:
/// 'S' split, 'P' enclosure positive, 'N' enclosure negative, 'C' excluded
/// by a constraint.
struct BoxLog {
  Box box;
  std::string log;
  bool operator==(const BoxLog& o) const { return box == o.box && log == o.log; }
};

/// Machine-checkable evidence for the sign of `poly`.
///
/// Implied region per kind:
///  - constant, even_monomial, perfect_square, sos_user: the whole plane.
///    perfect_square and sos_user assert s*poly = sum(squares^2) + offset
///    with s = -1 for negative claims.
///  - leading_form_radius: points with max(|x|,|y|) > radius (axes "xy"),
///    |x| > radius ("x") or |y| > radius ("y").
///  - bb_tree: the union of the root boxes minus constraint-excluded leaves.
///  - cover: outside `excluded` (or everywhere), subject to `constraints`.
///    parts[0] handles max-norm > radius, parts[1] is the bb_tree on the rest.
///    `subject` = -1 means parts[0] is about poly, k >= 0 means it shows
///    constraint k fails out there.
///  - infeasible: parts[0] shows constraint `subject` never holds.
struct SignCertificate {
  CertKind kind = CertKind::constant;
  Sign claimed = Sign::positive;
  BivarPoly poly;
  Rational offset;
  std::vector<BivarPoly> squares;
  std::string axes = "xy";
  double radius = 0.0;
  double form_min = 0.0;
  std::vector<Constraint> constraints;
  std::vector<BoxLog> boxes;
  std::optional<Box> excluded;
  int subject = -1;
  std::vector<SignCertificate> parts;
};

struct Witness {
  /// One exact zero, or two points where the values have opposite signs.
  std::vector<std::pair<Rational, Rational>> points;
  std::string note;
};

struct SosHint {
  std::vector<BivarPoly> squares;
  Rational offset;
};

struct PositivityOptions {
  std::size_t budget = 1'000'000;  // branch-and-bound nodes
  unsigned threads = 1;
  std::vector<SosHint> sos_hints;
};

struct GlobalSignResult {
  enum class Status { positive, negative, nonnegative, nonpositive, indefinite, unknown };
  Status status = Status::unknown;
  std::optional<SignCertificate> cert;
  std::optional<Witness> witness;
  std::string note;
};

/// Sign of p over all of R^2. Certificates are tried cheapest first:
/// constant, even monomials, perfect squares, leading form plus
/// branch-and-bound, then user sums of squares.
GlobalSignResult global_sign(const BivarPoly& p, const PositivityOptions& options = {});

struct EventualSignResult {
  enum class Status { positive_outside, negative_outside, unknown };
  Status status = Status::unknown;
  double radius = 0.0;
  std::optional<SignCertificate> cert;
  std::string note;
};

/// Fixed sign outside a box [-R, R]^2 (or a strip for univariate p) from a
/// definite leading form. Throws std::invalid_argument on the zero polynomial.
EventualSignResult eventual_sign(const BivarPoly& p, const PositivityOptions& options = {});

struct NonvanishingResult {
  enum class Status { proved, refuted, unknown };
  Status status = Status::unknown;
  std::optional<SignCertificate> cert;
  std::optional<Witness> witness;
  /// Set when the proof picked the compact set for an `eventually` region.
  std::optional<Box> chosen_k;
  std::string note;
};

NonvanishingResult nonvanishing_on(const BivarPoly& p, const Region& region, const PositivityOptions& options = {});

/// Best rational M with M - p >= 0 (upper) or p - M >= 0 (lower), certified.
struct BoundResult {
  bool upper = true;
  Rational bound;
  SignCertificate cert;  // certifies (M - p) or (p - M) nonnegative
};
std::optional<BoundResult> one_sided_bound(const BivarPoly& p, const PositivityOptions& options = {});

/// Exact replay of a certificate against p. Never throws; malformed
/// certificates are rejected.
bool verify_certificate(const BivarPoly& p, const SignCertificate& cert);

/// True when the region implied by `cert` contains `region` and the claimed
/// sign forces p != 0 there. Pair with verify_certificate.
bool certificate_covers(const SignCertificate& cert, const Region& region);
/// True when the certificate's implied region is the whole plane.
bool certificate_is_global(const SignCertificate& cert);

}  // namespace planar
