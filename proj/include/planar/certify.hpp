#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "planar/falsify.hpp"
#include "planar/jacobian.hpp"
#include "planar/parser.hpp"
#include "planar/positivity.hpp"
#include "planar/spectrum.hpp"

namespace planar {

enum class Outcome { proved_injective, unknown, not_applicable, heuristic_only };
std::string to_string(Outcome o);

/// One certified fact a verdict relies on.
struct Claim {
  enum class Requirement { positive, nonnegative, nonvanishing };
  std::string statement;  // e.g. "2 - T >= 0"
  BivarPoly poly;
  Requirement requirement = Requirement::nonvanishing;
  Region region;  // nonvanishing only
  SignCertificate cert;
};
std::string to_string(Claim::Requirement r);

/// Exact replay of a claim: the certificate must verify for poly and
/// establish the requirement on the claim's region.
bool audit_claim(const Claim& claim);
/// Same audit on a serialized certificate, which must also be canonical.
bool audit_claim_text(const Claim& claim, const std::string& cert_text);

struct Verdict {
  std::string criterion;  // stable identifier, sorts the report
  std::string theorem;    // citation tag of the injectivity criterion
  Outcome outcome = Outcome::unknown;
  std::vector<Claim> claims;
  std::optional<Witness> refutation;  // hypothesis fails at these points
  std::string notes;
  double wall_ms = 0.0;
};

struct CriterionParams {
  Rational a{1};
  Rational b{1};
  Rational c{2};
  Rational h{3};
  Rational u{0};
  Rational z{2};
  std::optional<Box> k;  // pins the compact set for "outside K" checks

  /// Throws std::invalid_argument on a > 0, b > 0, 0 <= c <= 4,
  /// -1 <= u <= 1, z not in {-1, 0, 1} violations.
  void validate() const;
};

/// Invariants plus the facts every checker needs about D.
struct CheckContext {
  JacobianData jd;
  Classification classification;
  bool normalized = false;  // Q was divided by a constant determinant
  PositivityOptions options;
};

/// Builds the context, normalising jacobian_map(d) with d > 0 to D = 1.
CheckContext make_context(const BivarPoly& p, const BivarPoly& q, const PositivityOptions& options = {});

enum class CurveSide { nonnegative_trace, nonpositive_trace };

Verdict check_power_curve(const CheckContext& ctx, const Rational& a, const Rational& b, CurveSide side,
                          const std::optional<Box>& k = std::nullopt);
Verdict check_ratio_line(const CheckContext& ctx, const Rational& c, const std::optional<Box>& k = std::nullopt);
/// Unit-circle point u + i sqrt(1 - u^2) outside K.
Verdict check_spectral_gap_circle(const CheckContext& ctx, const Rational& u, const std::optional<Box>& k = std::nullopt);
/// Real point z not in {-1, 0, 1}, on the whole plane.
Verdict check_spectral_gap_real(const CheckContext& ctx, const Rational& z);
/// |h| <= 2: outside K; |h| > 2: on the whole plane.
Verdict check_trace_avoids(const CheckContext& ctx, const Rational& h, const std::optional<Box>& k = std::nullopt);
Verdict check_trace_bounded(const CheckContext& ctx);

struct SweepParams {
  std::vector<Rational> c = {Rational(0), Rational(1), Rational(2), Rational(3), Rational(4)};
  std::vector<Rational> h;  // default -2, -3/2, ..., 2
  std::vector<Rational> z = {Rational(-3), Rational(-2), Rational(2), Rational(3)};
  std::vector<Rational> u = {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)};
  std::vector<std::pair<Rational, Rational>> curves = {{Rational(1), Rational(1)},
                                                       {Rational(1), Rational(2)},
                                                       {Rational(2), Rational(1)}};
  std::optional<Box> k;
  SweepParams();
};

struct CertifyOptions {
  PositivityOptions positivity;
  SweepParams sweep;
  std::uint64_t seed = 1;
  std::size_t falsify_budget = 100'000;
  GridSpec evidence_grid{-2.0, 2.0, -2.0, 2.0, 21, 21};
};

struct SpectrumEvidence {
  std::size_t samples = 0;
  std::size_t invalid = 0;
  std::size_t positive_real = 0;  // samples with an eigenvalue in (0, inf)
  double min_det = 0.0;           // lambda1 * lambda2 over valid samples
  double max_det = 0.0;
};

struct Report {
  MapSpec map;
  Classification classification;
  bool normalized = false;
  JacobianData jd;  // polynomial maps only
  std::vector<Verdict> verdicts;  // sorted by criterion
  Outcome outcome = Outcome::unknown;
  std::optional<std::string> winner;
  std::optional<CollisionWitness> collision;
  std::optional<SpectrumEvidence> evidence;
  std::string conclusion;
  CertifyOptions options;
};

Report certify_all(const MapSpec& map, const CertifyOptions& options = {});

/// Byte-stable JSON (keys sorted, schema 1). Wall times are left out.
nlohmann::json report_to_json(const Report& report);
std::string report_text(const Report& report);

}  // namespace planar
