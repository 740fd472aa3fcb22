#include "planar/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace planar {

std::string to_string(DiscSign s) {
  switch (s) {
    case DiscSign::neg: return "neg";
    case DiscSign::zero: return "zero";
    case DiscSign::pos: return "pos";
  }
  return "?";
}

void GridSpec::validate() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
  if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) || !std::isfinite(y1)) {
    throw std::invalid_argument("grid ranges must be finite");
  }
  if (x0 > x1 || y0 > y1) throw std::invalid_argument("grid ranges must have lo <= hi");
}

namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

int parse_count(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad count '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("bad count '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  const auto axes = split(text, ',');
  if (axes.size() != 2) throw std::invalid_argument("grid must be x0:x1:nx,y0:y1:ny");
  const auto xs = split(axes[0], ':');
  const auto ys = split(axes[1], ':');
  if (xs.size() != 3 || ys.size() != 3) throw std::invalid_argument("grid must be x0:x1:nx,y0:y1:ny");
  GridSpec g;
  g.x0 = parse_double(xs[0]);
  g.x1 = parse_double(xs[1]);
  g.nx = parse_count(xs[2]);
  g.y0 = parse_double(ys[0]);
  g.y1 = parse_double(ys[1]);
  g.ny = parse_count(ys[2]);
  g.validate();
  return g;
}

SpectrumSampler::SpectrumSampler(const PlanarMap& map) : map_(&map) {
  if (map.is_polynomial()) {
    const JacobianData jd = jacobian_data(map);
    trace_.emplace(jd.trace);
    det_.emplace(jd.det);
  }
}

SpectrumSample SpectrumSampler::at(double x, double y) const {
  SpectrumSample s;
  s.point = {x, y};
  try {
    EigenPair e;
    if (trace_) {
      e = eigen_from_invariants(trace_->eval(x, y), det_->eval(x, y));
    } else {
      e = eigen_at(map_->jacobian(x, y));
    }
    if (!std::isfinite(e.disc)) throw std::domain_error("non-finite discriminant");
    s.lambda1 = e.lambda1;
    s.lambda2 = e.lambda2;
    s.disc_sign = e.disc < 0 ? DiscSign::neg : (e.disc > 0 ? DiscSign::pos : DiscSign::zero);
  } catch (const std::domain_error&) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.lambda1 = s.lambda2 = {nan, nan};
    s.valid = false;
  }
  return s;
}

std::vector<SpectrumSample> SpectrumSampler::grid(const GridSpec& g, unsigned threads) const {
  g.validate();
  const auto n = static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
  std::vector<SpectrumSample> out(n);
  auto node = [&](std::size_t k) {
    const auto i = static_cast<double>(k % static_cast<std::size_t>(g.nx));
    const auto j = static_cast<double>(k / static_cast<std::size_t>(g.nx));
    const double x = g.x0 + (g.x1 - g.x0) * i / (g.nx - 1);
    const double y = g.y0 + (g.y1 - g.y0) * j / (g.ny - 1);
    out[k] = at(x, y);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n / 256 + 1)));
  if (workers == 1) {
    for (std::size_t k = 0; k < n; ++k) node(k);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < n; k += workers) node(k);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

std::vector<SpectrumSample> SpectrumSampler::segment(Point a, Point b, std::size_t n) const {
  if (n == 0) throw std::invalid_argument("segment needs at least one step");
  std::vector<SpectrumSample> out;
  out.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n);
    out.push_back(at(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t));
  }
  return out;
}

std::vector<SpectrumSample> sample_grid(const PlanarMap& map, const GridSpec& grid, unsigned threads) {
  return SpectrumSampler(map).grid(grid, threads);
}

double g_deviation(std::complex<double> lambda) {
  if (lambda.imag() == 0.0 && lambda.real() != 0.0) return 0.0;
  return std::fabs(std::abs(lambda) - 1.0);
}

GReport g_membership(const std::vector<SpectrumSample>& samples, double tol) {
  GReport r;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (!s.valid) {
      ++r.invalid;
      continue;
    }
    const double dev = std::max(g_deviation(s.lambda1), g_deviation(s.lambda2));
    r.max_deviation = std::max(r.max_deviation, dev);
    if (dev >= tol) r.violations.push_back(k);
  }
  return r;
}

// ---- CSV ----------------------------------------------------------------

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<SpectrumSample>& samples) {
  out << "x,y,re1,im1,re2,im2,disc_sign\n";
  for (const auto& s : samples) {
    out << fmt17(s.point.x) << ',' << fmt17(s.point.y) << ',' << fmt17(s.lambda1.real()) << ','
        << fmt17(s.lambda1.imag()) << ',' << fmt17(s.lambda2.real()) << ',' << fmt17(s.lambda2.imag()) << ','
        << (s.valid ? to_string(s.disc_sign) : std::string("invalid")) << '\n';
  }
}

std::vector<SpectrumSample> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,y,re1,im1,re2,im2,disc_sign") {
    throw std::runtime_error("missing spectrum CSV header");
  }
  std::vector<SpectrumSample> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw std::runtime_error("row " + std::to_string(row) + ": expected 7 fields");
    SpectrumSample s;
    try {
      s.point = {parse_double(f[0]), parse_double(f[1])};
      s.lambda1 = {parse_double(f[2]), parse_double(f[3])};
      s.lambda2 = {parse_double(f[4]), parse_double(f[5])};
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("row " + std::to_string(row) + ": " + e.what());
    }
    if (f[6] == "neg") s.disc_sign = DiscSign::neg;
    else if (f[6] == "zero") s.disc_sign = DiscSign::zero;
    else if (f[6] == "pos") s.disc_sign = DiscSign::pos;
    else if (f[6] == "invalid") s.valid = false;
    else throw std::runtime_error("row " + std::to_string(row) + ": bad disc_sign '" + f[6] + "'");
    out.push_back(s);
  }
  return out;
}

// ---- SVG ----------------------------------------------------------------

namespace {

constexpr double kSize = 800.0;
constexpr double kMargin = 40.0;

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct View {
  double u0, u1, v0, v1;
  [[nodiscard]] double px(double u) const { return kMargin + (u - u0) / (u1 - u0) * (kSize - 2 * kMargin); }
  [[nodiscard]] double py(double v) const { return kSize - kMargin - (v - v0) / (v1 - v0) * (kSize - 2 * kMargin); }
};

View fit(const std::vector<SpectrumSample>& samples) {
  View w{-1.0, 1.0, -1.0, 1.0};
  for (const auto& s : samples) {
    if (!s.valid) continue;
    for (auto l : {s.lambda1, s.lambda2}) {
      if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) continue;
      w.u0 = std::min(w.u0, l.real());
      w.u1 = std::max(w.u1, l.real());
      w.v0 = std::min(w.v0, l.imag());
      w.v1 = std::max(w.v1, l.imag());
    }
  }
  // equal scale on both axes so the unit circle stays round
  const double half = 0.5 * std::max(w.u1 - w.u0, w.v1 - w.v0) * 1.05;
  const double cu = 0.5 * (w.u0 + w.u1);
  const double cv = 0.5 * (w.v0 + w.v1);
  return {cu - half, cu + half, cv - half, cv + half};
}

std::string polyline(const View& w, const std::vector<std::pair<double, double>>& pts, const std::string& color) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) s += ' ';
    s += fmt3(w.px(pts[k].first)) + "," + fmt3(w.py(pts[k].second));
  }
  return s + "\"/>\n";
}

}  // namespace

std::string render_svg(const std::vector<SpectrumSample>& samples, const std::vector<Overlay>& overlays) {
  const View w = fit(samples);
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n"
    << "<clipPath id=\"plot\"><rect x=\"" << fmt3(kMargin) << "\" y=\"" << fmt3(kMargin) << "\" width=\""
    << fmt3(kSize - 2 * kMargin) << "\" height=\"" << fmt3(kSize - 2 * kMargin) << "\"/></clipPath>\n"
    << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  // axes through the origin when visible, else along the frame
  const double ax = std::clamp(w.px(0.0), kMargin, kSize - kMargin);
  const double ay = std::clamp(w.py(0.0), kMargin, kSize - kMargin);
  o << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
    << "<line x1=\"" << fmt3(kMargin) << "\" y1=\"" << fmt3(ay) << "\" x2=\"" << fmt3(kSize - kMargin) << "\" y2=\""
    << fmt3(ay) << "\"/>\n"
    << "<line x1=\"" << fmt3(ax) << "\" y1=\"" << fmt3(kMargin) << "\" x2=\"" << fmt3(ax) << "\" y2=\""
    << fmt3(kSize - kMargin) << "\"/>\n"
    << "</g>\n";
  o << "<text x=\"" << fmt3(kMargin) << "\" y=\"20\" font-size=\"12\">Re [" << fmt3(w.u0) << ", " << fmt3(w.u1)
    << "]  Im [" << fmt3(w.v0) << ", " << fmt3(w.v1) << "]</text>\n";
  o << "<g id=\"eigenvalues\" fill=\"steelblue\" fill-opacity=\"0.6\" clip-path=\"url(#plot)\">\n";
  for (const auto& s : samples) {
    if (!s.valid) continue;
    for (auto l : {s.lambda1, s.lambda2}) {
      if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) continue;
      o << "<circle cx=\"" << fmt3(w.px(l.real())) << "\" cy=\"" << fmt3(w.py(l.imag())) << "\" r=\"1.5\"/>\n";
    }
  }
  o << "</g>\n<g id=\"overlays\" clip-path=\"url(#plot)\">\n";
  const double reach = std::max({std::fabs(w.u0), std::fabs(w.u1), std::fabs(w.v0), std::fabs(w.v1)}) * 2.0;
  for (const auto& ov : overlays) {
    switch (ov.kind) {
      case Overlay::Kind::unit_circle: {
        const double r = (w.px(1.0) - w.px(0.0));
        o << "<circle cx=\"" << fmt3(w.px(0.0)) << "\" cy=\"" << fmt3(w.py(0.0)) << "\" r=\"" << fmt3(r)
          << "\" fill=\"none\" stroke=\"darkred\" stroke-width=\"1.5\"/>\n";
        break;
      }
      case Overlay::Kind::power_curve: {
        std::vector<std::pair<double, double>> pts;
        const int n = 200;
        for (int k = 0; k <= n; ++k) {
          const double u = reach * k / n;
          pts.emplace_back(u, ov.a * std::pow(u, ov.b));
        }
        o << polyline(w, pts, "darkgreen");
        break;
      }
      case Overlay::Kind::ratio_line: {
        std::pair<double, double> far;
        if (ov.c <= 0.0) far = {0.0, reach};
        else far = {reach, std::sqrt((4.0 - ov.c) / ov.c) * reach};
        if (ov.c >= 4.0) far = {reach, 0.0};
        o << polyline(w, {{0.0, 0.0}, far}, "darkorange");
        break;
      }
    }
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

PlotFiles emit_plot(const std::vector<SpectrumSample>& samples, const std::vector<Overlay>& overlays,
                    const std::filesystem::path& stem) {
  PlotFiles files{stem, stem};
  files.csv += ".csv";
  files.svg += ".svg";
  {
    std::ofstream csv(files.csv);
    if (!csv) throw std::runtime_error("cannot write " + files.csv.string());
    write_csv(csv, samples);
    if (!csv) throw std::runtime_error("write failed for " + files.csv.string());
  }
  std::ofstream svg(files.svg);
  if (!svg) throw std::runtime_error("cannot write " + files.svg.string());
  svg << render_svg(samples, overlays);
  if (!svg) throw std::runtime_error("write failed for " + files.svg.string());
  return files;
}

}  // namespace planar
