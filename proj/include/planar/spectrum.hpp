#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "planar/jacobian.hpp"
#include "planar/planar_map.hpp"

namespace planar {

enum class DiscSign { neg, zero, pos };
std::string to_string(DiscSign s);

struct SpectrumSample {
  Point point;
  std::complex<double> lambda1;
  std::complex<double> lambda2;
  DiscSign disc_sign = DiscSign::zero;
  bool valid = true;  // false when the Jacobian was not finite at point
};

struct GridSpec {
  double x0 = -2.0, x1 = 2.0;
  double y0 = -2.0, y1 = 2.0;
  int nx = 101, ny = 101;

  /// Throws std::invalid_argument unless nx, ny >= 2 and the ranges are
  /// finite with x0 <= x1, y0 <= y1.
  void validate() const;
  /// Parses "x0:x1:nx,y0:y1:ny".
  static GridSpec parse(const std::string& text);
};

/// Eigenvalue sampler for one map. Polynomial maps evaluate the exact
/// trace and determinant polynomials; black boxes use finite differences.
class SpectrumSampler {
 public:
  explicit SpectrumSampler(const PlanarMap& map);

  [[nodiscard]] SpectrumSample at(double x, double y) const;
  /// Row-major: y outer, x inner.
  [[nodiscard]] std::vector<SpectrumSample> grid(const GridSpec& grid, unsigned threads = 1) const;
  /// n + 1 samples at a + k (b - a) / n.
  [[nodiscard]] std::vector<SpectrumSample> segment(Point a, Point b, std::size_t n) const;

 private:
  const PlanarMap* map_;
  std::optional<CompiledPoly> trace_, det_;
};

std::vector<SpectrumSample> sample_grid(const PlanarMap& map, const GridSpec& grid, unsigned threads = 1);

struct GReport {
  double max_deviation = 0.0;
  std::vector<std::size_t> violations;  // indices into the sample list
  std::size_t invalid = 0;
};

/// Distance of each eigenvalue from the set (-inf, 0) u S^1 u (0, inf):
/// 0 for a real nonzero eigenvalue, | |lambda| - 1 | otherwise.
double g_deviation(std::complex<double> lambda);
GReport g_membership(const std::vector<SpectrumSample>& samples, double tol);

struct Overlay {
  enum class Kind { power_curve, ratio_line, unit_circle };
  Kind kind = Kind::unit_circle;
  double a = 1.0, b = 1.0;  // v = a u^b, u >= 0
  double c = 2.0;           // sqrt(4 - c) u = sqrt(c) v
};

void write_csv(std::ostream& out, const std::vector<SpectrumSample>& samples);
/// Inverse of write_csv. Throws std::runtime_error on malformed input.
std::vector<SpectrumSample> read_csv(std::istream& in);
std::string render_svg(const std::vector<SpectrumSample>& samples, const std::vector<Overlay>& overlays);

struct PlotFiles {
  std::filesystem::path csv;
  std::filesystem::path svg;
};

/// Writes <stem>.csv and <stem>.svg. Throws std::runtime_error when a file
/// cannot be written.
PlotFiles emit_plot(const std::vector<SpectrumSample>& samples, const std::vector<Overlay>& overlays,
                    const std::filesystem::path& stem);

}  // namespace planar
