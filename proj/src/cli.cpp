#include "planar/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "planar/certify.hpp"
#include "planar/falsify.hpp"
#include "planar/parser.hpp"
#include "planar/spectrum.hpp"

namespace planar::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string map_path;
  std::string builtin;
  std::size_t budget = 0;  // 0: the subcommand default
  std::uint64_t seed = 1;
  std::string grid = "-2:2:101,-2:2:101";
  std::vector<std::string> params;
  std::string format = "text";
  std::string out_dir;
  unsigned threads = 1;
  std::size_t falsify_budget = 100'000;
  std::vector<std::string> overlays;
};

MapSpec load(const Config& cfg) {
  if (!cfg.builtin.empty() && !cfg.map_path.empty()) throw UsageError("give either a map file or --builtin, not both");
  if (!cfg.builtin.empty()) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), cfg.builtin) == names.end()) {
      throw UsageError("unknown builtin '" + cfg.builtin + "'");
    }
    return make_blackbox_map(cfg.builtin, cfg.builtin);
  }
  if (cfg.map_path.empty()) throw UsageError("a map file or --builtin is required");
  try {
    MapSpec spec = load_map_file(cfg.map_path);
    if (spec.kind == MapKind::blackbox) (void)PlanarMap::from_spec(spec);
    return spec;
  } catch (const ParseError& e) {
    throw InputError(cfg.map_path + ":" + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(cfg.map_path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

Rational param_rational(const std::string& key, const std::string& value) {
  try {
    return rational_from_string(value);
  } catch (const std::invalid_argument&) {
    throw UsageError("--params " + key + ": '" + value + "' is not a rational");
  }
}

Box param_box(const std::string& value) {
  std::vector<double> v;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ':')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("--params K: bad number '" + part + "'");
    }
  }
  if (v.size() != 4 || !(v[0] <= v[1]) || !(v[2] <= v[3])) {
    throw UsageError("--params K must be x0:x1:y0:y1 with x0 <= x1 and y0 <= y1");
  }
  for (double d : v) {
    if (!std::isfinite(d)) throw UsageError("--params K must be bounded");
  }
  return {Interval(v[0], v[1]), Interval(v[2], v[3])};
}

// key=value pairs; repeating a key collects several values for that sweep.
SweepParams parse_params(const std::vector<std::string>& items) {
  std::map<std::string, std::vector<std::string>> kv;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--params expects key=value, got '" + pair + "'");
      kv[pair.substr(0, eq)].push_back(pair.substr(eq + 1));
    }
  }
  SweepParams sw;
  std::vector<Rational> as, bs;
  for (const auto& [key, values] : kv) {
    std::vector<Rational> rs;
    if (key == "K") {
      if (values.size() != 1) throw UsageError("--params K given twice");
      sw.k = param_box(values.front());
      continue;
    }
    for (const auto& v : values) rs.push_back(param_rational(key, v));
    CriterionParams check;
    for (const auto& r : rs) {
      try {
        if (key == "a") check.a = r;
        else if (key == "b") check.b = r;
        else if (key == "c") check.c = r;
        else if (key == "u") check.u = r;
        else if (key == "z") check.z = r;
        else if (key != "h") throw UsageError("unknown --params key '" + key + "'");
        check.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--params: ") + e.what());
      }
    }
    if (key == "a") as = rs;
    else if (key == "b") bs = rs;
    else if (key == "c") sw.c = rs;
    else if (key == "h") sw.h = rs;
    else if (key == "u") sw.u = rs;
    else if (key == "z") sw.z = rs;
  }
  if (!as.empty() || !bs.empty()) {
    if (as.empty()) as = {Rational(1)};
    if (bs.empty()) bs = {Rational(1)};
    sw.curves.clear();
    for (const auto& a : as) {
      for (const auto& b : bs) sw.curves.emplace_back(a, b);
    }
  }
  return sw;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::filesystem::path out_dir(const Config& cfg) {
  std::filesystem::path dir = cfg.out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

int cmd_analyze(const Config& cfg, std::ostream& out) {
  const MapSpec spec = load(cfg);
  if (spec.kind == MapKind::blackbox) {
    const PlanarMap m = PlanarMap::from_spec(spec);
    const auto j = m.jacobian(0.0, 0.0);
    out << "map: " << spec.name << " (blackbox " << spec.builtin << ")\n"
        << std::setprecision(17) << "J(0,0) = [[" << j.a << ", " << j.b << "], [" << j.c << ", " << j.d
        << "]] (central differences)\n";
    return kOk;
  }
  PositivityOptions po;
  if (cfg.budget) po.budget = cfg.budget;
  po.threads = cfg.threads;
  const JacobianData jd = jacobian_data(spec.p, spec.q);
  const Classification cls = classify(jd, po);
  if (cfg.format == "json") {
    nlohmann::json j = {{"name", spec.name},
                        {"P", spec.p.to_string()},
                        {"Q", spec.q.to_string()},
                        {"T", jd.trace.to_string()},
                        {"D", jd.det.to_string()},
                        {"Delta", jd.disc.to_string()},
                        {"classification", cls.describe()}};
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "map: " << spec.name << "\n"
      << "P = " << spec.p.to_string() << "\n"
      << "Q = " << spec.q.to_string() << "\n"
      << "T = " << jd.trace.to_string() << "\n"
      << "D = " << jd.det.to_string() << "\n"
      << "Delta = " << jd.disc.to_string() << "\n"
      << "classification: " << cls.describe();
  if (!cls.note.empty()) out << " (" << cls.note << ")";
  out << "\n";
  return kOk;
}

int cmd_certify(const Config& cfg, std::ostream& out) {
  const MapSpec spec = load(cfg);
  CertifyOptions opts;
  if (cfg.budget) opts.positivity.budget = cfg.budget;
  opts.positivity.threads = cfg.threads;
  opts.seed = cfg.seed;
  opts.falsify_budget = cfg.falsify_budget;
  opts.sweep = parse_params(cfg.params);
  const Report report = certify_all(spec, opts);
  const std::string json_text = report_to_json(report).dump(2) + "\n";
  const std::string text = report_text(report);
  out << (cfg.format == "json" ? json_text : text);
  if (!cfg.out_dir.empty()) {
    const auto dir = out_dir(cfg);
    write_file(dir / "report.json", json_text);
    write_file(dir / "report.txt", text);
  }
  return kOk;
}

std::vector<Overlay> parse_overlays(const Config& cfg) {
  std::vector<Overlay> out;
  const SweepParams sw = parse_params(cfg.params);
  for (const auto& name : cfg.overlays) {
    Overlay o;
    if (name == "circle") {
      o.kind = Overlay::Kind::unit_circle;
    } else if (name == "power") {
      o.kind = Overlay::Kind::power_curve;
      o.a = sw.curves.front().first.get_d();
      o.b = sw.curves.front().second.get_d();
    } else if (name == "ratio") {
      o.kind = Overlay::Kind::ratio_line;
      o.c = sw.c.front().get_d();
    } else {
      throw UsageError("unknown overlay '" + name + "' (circle, power, ratio)");
    }
    out.push_back(o);
  }
  return out;
}

int cmd_spectrum(const Config& cfg, std::ostream& out) {
  const MapSpec spec = load(cfg);
  GridSpec grid;
  try {
    grid = GridSpec::parse(cfg.grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  const auto overlays = parse_overlays(cfg);
  const PlanarMap m = PlanarMap::from_spec(spec);
  const auto samples = sample_grid(m, grid, cfg.threads);
  const auto g = g_membership(samples, 1e-9);
  const auto files = emit_plot(samples, overlays, out_dir(cfg) / spec.name);
  if (cfg.format == "json") {
    nlohmann::json j = {{"samples", samples.size()},
                        {"invalid", g.invalid},
                        {"g_max_deviation", g.max_deviation},
                        {"g_violations", g.violations.size()},
                        {"csv", files.csv.string()},
                        {"svg", files.svg.string()}};
    out << j.dump(2) << "\n";
  } else {
    out << "samples: " << samples.size() << " (" << g.invalid << " invalid)\n"
        << std::setprecision(6) << "G deviation: max " << g.max_deviation << ", " << g.violations.size()
        << " samples at or above 1e-9\n"
        << "wrote " << files.csv.string() << "\nwrote " << files.svg.string() << "\n";
  }
  return kOk;
}

int cmd_falsify(const Config& cfg, std::ostream& out) {
  const MapSpec spec = load(cfg);
  FalsifyOptions fo;
  fo.seed = cfg.seed;
  if (cfg.budget) fo.budget = cfg.budget;
  fo.threads = cfg.threads;
  const PlanarMap m = PlanarMap::from_spec(spec);
  const auto r = search_collision(m, fo);
  std::string text;
  nlohmann::json j;
  if (!r.witness) {
    text = "none (" + std::to_string(r.evaluations) + " evaluations, " + std::to_string(r.starts) + " starts)\n";
    j = {{"witness", nullptr}, {"evaluations", r.evaluations}, {"starts", r.starts}};
  } else {
    const auto& w = *r.witness;
    std::ostringstream o;
    o << std::setprecision(17) << "witness: p = (" << w.p.x << ", " << w.p.y << "), q = (" << w.q.x << ", " << w.q.y
      << ")\n"
      << "  dx = " << (w.q.x - w.p.x) << ", dy = " << (w.q.y - w.p.y) << "\n"
      << "  residual = " << w.residual << ", separation = " << w.separation << "\n"
      << "  start " << w.start << ", " << r.evaluations << " evaluations\n";
    text = o.str();
    j = {{"witness",
          {{"p", {w.p.x, w.p.y}},
           {"q", {w.q.x, w.q.y}},
           {"residual", w.residual},
           {"separation", w.separation},
           {"start", w.start}}},
         {"evaluations", r.evaluations},
         {"starts", r.starts}};
  }
  const std::string json_text = j.dump(2) + "\n";
  out << (cfg.format == "json" ? json_text : text);
  if (!cfg.out_dir.empty()) write_file(out_dir(cfg) / "witness.json", json_text);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Injectivity certificates for planar maps", "planarinj"};
  app.require_subcommand(1);
  Config cfg;
  auto common = [&cfg](CLI::App* sub, bool takes_budget) {
    sub->add_option("map", cfg.map_path, "map definition file");
    sub->add_option("--builtin", cfg.builtin, "use a built-in black-box map");
    if (takes_budget) sub->add_option("--budget", cfg.budget, "node or evaluation budget")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_dir, "output directory");
  };
  auto* analyze = app.add_subcommand("analyze", "print T, D, Delta and the classification");
  common(analyze, true);
  auto* certify = app.add_subcommand("certify", "run every injectivity criterion");
  common(certify, true);
  certify->add_option("--seed", cfg.seed, "falsifier seed");
  certify->add_option("--params", cfg.params, "key=value,... sweep overrides (a, b, c, h, u, z, K=x0:x1:y0:y1)");
  certify->add_option("--falsify-budget", cfg.falsify_budget, "evaluations for the collision search")
      ->check(CLI::PositiveNumber);
  auto* spectrum = app.add_subcommand("spectrum", "sample eigenvalues on a grid, write CSV and SVG");
  common(spectrum, false);
  spectrum->add_option("--grid", cfg.grid, "x0:x1:nx,y0:y1:ny");
  spectrum->add_option("--params", cfg.params, "overlay parameters a, b, c");
  spectrum->add_option("--overlay", cfg.overlays, "circle, power or ratio");
  auto* falsify = app.add_subcommand("falsify", "search for a collision F(p) = F(q)");
  common(falsify, true);
  falsify->add_option("--seed", cfg.seed, "random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }
  try {
    if (*analyze) return cmd_analyze(cfg, out);
    if (*certify) return cmd_certify(cfg, out);
    if (*spectrum) return cmd_spectrum(cfg, out);
    return cmd_falsify(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace planar::cli
