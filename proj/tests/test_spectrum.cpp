#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "planar/parser.hpp"
#include "planar/spectrum.hpp"

using namespace planar;

namespace {

PlanarMap poly_map(const char* p, const char* q) { return PlanarMap::polynomial("m", parse_poly(p), parse_poly(q)); }

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("identity samples are the double root 1") {
  const auto samples = sample_grid(poly_map("x", "y"), GridSpec{-3, 3, -1, 1, 7, 5});
  REQUIRE(samples.size() == 35u);
  for (const auto& s : samples) {
    CHECK(s.lambda1 == std::complex<double>(1, 0));
    CHECK(s.lambda2 == std::complex<double>(1, 0));
    CHECK(s.disc_sign == DiscSign::zero);
  }
  const auto rep = g_membership(samples, 1e-12);
  CHECK(rep.max_deviation == 0.0);
  CHECK(rep.violations.empty());
}

TEST_CASE("grid is row major") {
  const auto samples = sample_grid(poly_map("x", "y"), GridSpec{0, 1, 10, 20, 2, 3});
  CHECK(samples[1].point.x == 1.0);
  CHECK(samples[1].point.y == 10.0);
  CHECK(samples[2].point.x == 0.0);
  CHECK(samples[2].point.y == 15.0);
}

TEST_CASE("grid specs") {
  const auto g = GridSpec::parse("-1:1:11,0:2:3");
  CHECK(g.x0 == -1.0);
  CHECK(g.nx == 11);
  CHECK(g.ny == 3);
  CHECK_THROWS_AS(GridSpec::parse("-1:1:1,0:2:3"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("1:-1:4,0:2:3"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("-1:1:4"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("a:1:4,0:2:3"), std::invalid_argument);
}

TEST_CASE("exponential map at the origin has eigenvalues plus and minus one") {
  const auto spec = fixture("exp_spiral");
  const auto map = PlanarMap::from_spec(spec);
  const auto s = SpectrumSampler(map).at(0, 0);
  CHECK(s.valid);
  CHECK(s.disc_sign == DiscSign::pos);
  CHECK(std::abs(s.lambda1 - 1.0) < 1e-8);
  CHECK(std::abs(s.lambda2 + 1.0) < 1e-8);
}

TEST_CASE("square_trace spectrum lies in G") {
  const auto spec = fixture("square_trace");
  const auto map = PlanarMap::from_spec(spec);
  const auto samples = sample_grid(map, GridSpec{});
  const auto rep = g_membership(samples, 1e-9);
  CHECK(rep.max_deviation < 1e-9);
  CHECK(rep.violations.empty());
  CHECK(rep.invalid == 0);
  CHECK(std::any_of(samples.begin(), samples.end(), [](const auto& s) { return s.disc_sign == DiscSign::neg; }));
  CHECK(std::any_of(samples.begin(), samples.end(), [](const auto& s) { return s.disc_sign == DiscSign::pos; }));
}

TEST_CASE("scaled rotation violates G") {
  const auto samples = sample_grid(poly_map("-2*y", "2*x"), GridSpec{-1, 1, -1, 1, 5, 5});
  const auto rep = g_membership(samples, 1e-9);
  CHECK(rep.violations.size() == samples.size());
  CHECK(rep.max_deviation == doctest::Approx(1.0));
}

TEST_CASE("g_deviation") {
  CHECK(g_deviation({3.0, 0.0}) == 0.0);
  CHECK(g_deviation({-0.5, 0.0}) == 0.0);
  CHECK(g_deviation({0.0, 0.0}) == 1.0);
  CHECK(g_deviation({0.6, 0.8}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(g_deviation({0.0, 2.0}) == 1.0);
}

TEST_CASE("sampled clouds are conjugate symmetric") {
  const auto map = PlanarMap::from_spec(fixture("square_trace"));
  for (const auto& s : sample_grid(map, GridSpec{-2, 2, -2, 2, 41, 41})) {
    if (s.disc_sign == DiscSign::neg) {
      CHECK(s.lambda2 == std::conj(s.lambda1));
    } else {
      CHECK(s.lambda1.imag() == 0.0);
      CHECK(s.lambda2.imag() == 0.0);
    }
  }
}

TEST_CASE("branch sign on positive determinant fixtures") {
  for (const char* name : {"square_trace", "honesty", "cubic", "quintic"}) {
    const auto map = PlanarMap::from_spec(fixture(name));
    for (const auto& s : sample_grid(map, GridSpec{-2, 2, -2, 2, 61, 61})) {
      if (s.lambda1.real() * s.lambda2.real() < 0) CHECK(s.lambda1.real() >= -1e-12);
    }
  }
}

TEST_CASE("non-finite Jacobians are flagged, not dropped") {
  const auto samples = sample_grid(poly_map("x^40", "y"), GridSpec{0, 1e10, 0, 1, 3, 2});
  REQUIRE(samples.size() == 6u);
  const auto rep = g_membership(samples, 1e-9);
  CHECK(rep.invalid > 0);
  CHECK(std::count_if(samples.begin(), samples.end(), [](const auto& s) { return !s.valid; }) ==
        static_cast<long>(rep.invalid));
  std::ostringstream csv;
  write_csv(csv, samples);
  CHECK(csv.str().find("invalid") != std::string::npos);
}

TEST_CASE("threads do not change samples") {
  const auto map = PlanarMap::from_spec(fixture("square_trace"));
  const auto a = sample_grid(map, GridSpec{}, 1);
  const auto b = sample_grid(map, GridSpec{}, 8);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].lambda1 == b[k].lambda1);
    CHECK(a[k].lambda2 == b[k].lambda2);
  }
}

TEST_CASE("CSV round trip is bit exact") {
  const auto map = PlanarMap::from_spec(fixture("square_trace"));
  const auto samples = sample_grid(map, GridSpec{-2, 2, -2, 2, 31, 29});
  std::stringstream io;
  write_csv(io, samples);
  const auto back = read_csv(io);
  REQUIRE(back.size() == samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    CHECK(back[k].point.x == samples[k].point.x);
    CHECK(back[k].point.y == samples[k].point.y);
    CHECK(back[k].lambda1 == samples[k].lambda1);
    CHECK(back[k].lambda2 == samples[k].lambda2);
    CHECK(back[k].disc_sign == samples[k].disc_sign);
  }
  std::istringstream bad("x,y,re1,im1,re2,im2,disc_sign\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(bad), std::runtime_error);
}

TEST_CASE("empty inputs give a header and bare axes") {
  std::ostringstream csv;
  write_csv(csv, {});
  CHECK(csv.str() == "x,y,re1,im1,re2,im2,disc_sign\n");
  const auto svg = render_svg({}, {});
  CHECK(svg.find("width=\"800\"") != std::string::npos);
  CHECK(svg.find("height=\"800\"") != std::string::npos);
  CHECK(svg.find("<g id=\"axes\"") != std::string::npos);
  const auto start = svg.find("<g id=\"eigenvalues\"");
  const auto stop = svg.find("</g>", start);
  CHECK(svg.substr(start, stop - start).find("<circle") == std::string::npos);
}

TEST_CASE("SVG draws one marker per finite eigenvalue") {
  const auto map = PlanarMap::from_spec(fixture("square_trace"));
  const auto samples = sample_grid(map, GridSpec{-2, 2, -2, 2, 11, 11});
  const auto svg = render_svg(samples, {Overlay{Overlay::Kind::unit_circle}});
  const auto start = svg.find("<g id=\"eigenvalues\"");
  const auto stop = svg.find("</g>", start);
  CHECK(count(svg.substr(start, stop - start), "<circle") == 2 * samples.size());
  CHECK(render_svg(samples, {}) == render_svg(samples, {}));
}

TEST_CASE("power curve overlay with a = b = 1 is the diagonal ray") {
  Overlay ov;
  ov.kind = Overlay::Kind::power_curve;
  ov.a = 1;
  ov.b = 1;
  const auto svg = render_svg({}, {ov});
  const auto at = svg.find("<polyline");
  REQUIRE(at != std::string::npos);
  const auto pts_at = svg.find("points=\"", at) + 8;
  std::istringstream pts(svg.substr(pts_at, svg.find('"', pts_at) - pts_at));
  std::vector<std::pair<double, double>> xy;
  std::string tok;
  while (pts >> tok) {
    const auto comma = tok.find(',');
    xy.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
  }
  REQUIRE(xy.size() > 2);
  // equal axis scale: the ray has slope -1 in screen coordinates
  for (std::size_t k = 1; k < xy.size(); ++k) {
    CHECK((xy[k].first - xy[0].first) == doctest::Approx(-(xy[k].second - xy[0].second)).epsilon(1e-2));
  }
}

TEST_CASE("emit_plot writes both files") {
  const auto dir = std::filesystem::temp_directory_path() / "planar_spectrum_test";
  std::filesystem::create_directories(dir);
  const auto files = emit_plot(sample_grid(poly_map("x", "y"), GridSpec{-1, 1, -1, 1, 3, 3}), {}, dir / "id");
  CHECK(std::filesystem::exists(files.csv));
  CHECK(std::filesystem::exists(files.svg));
  CHECK_THROWS_AS(emit_plot({}, {}, dir / "missing" / "deeper" / "x"), std::runtime_error);
  std::filesystem::remove_all(dir);
}
