#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fbmin/cli.hpp"
#include "fbmin/errors.hpp"

namespace fbmin::cli {

namespace {

// Flag values, applied on top of the config file when given.
struct Flags {
  std::string config;
  std::vector<std::string> positional;  // kind [n [k [m]]]
  std::string metric;
  int n = 0;
  double k = 0, m = 0, beta = 0, r0 = 0, t0 = 0, t_max = 0, x_max = 0, slope = 0, tol = 0;
  std::vector<double> R_list, t0_fractions, k_grid, m_grid;
  int l_max = 0, angles = 0, samples = 0, jobs = 0;
  bool with_index = false;
  std::string target, out, format;
};

struct Bound {
  CLI::App* app;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;
};

Bound add_flags(CLI::App* sub, Flags& f) {
  Bound b{sub, {}};
  auto add = [&](CLI::Option* opt, std::function<void(RunConfig&)> set) {
    b.setters.emplace_back(opt, std::move(set));
  };
  sub->add_option("--config", f.config, "JSON run configuration; flags override it");
  sub->add_option("metric_args", f.positional, "metric kind, then n, k, m")->expected(0, 4);
  add(sub->add_option("--metric", f.metric, "schwarzschild | cylinder | beta | flat"),
      [&](RunConfig& c) { c.metric.kind = f.metric; });
  add(sub->add_option("--n", f.n, "dimension"), [&](RunConfig& c) { c.metric.n = f.n; });
  add(sub->add_option("--k", f.k, "Schwarzschild exponent k"), [&](RunConfig& c) { c.metric.k = f.k; });
  add(sub->add_option("--m", f.m, "mass"), [&](RunConfig& c) { c.metric.m = f.m; });
  add(sub->add_option("--beta", f.beta, "beta metric exponent"),
      [&](RunConfig& c) { c.metric.beta = f.beta; });
  add(sub->add_option("--r0", f.r0, "boundary radius for cylinder and beta metrics"),
      [&](RunConfig& c) { c.metric.r0 = f.r0; });
  add(sub->add_option("--t0", f.t0, "height of the boundary circle"), [&](RunConfig& c) { c.t0 = f.t0; });
  add(sub->add_option("--t-max", f.t_max, "height budget"), [&](RunConfig& c) { c.t_max = f.t_max; });
  add(sub->add_option("--x-max", f.x_max, "radius budget"), [&](RunConfig& c) { c.x_max = f.x_max; });
  add(sub->add_option("--slope-threshold", f.slope, "slope at which the solver switches to t(x)"),
      [&](RunConfig& c) { c.slope_threshold = f.slope; });
  add(sub->add_option("--tol", f.tol, "relative ODE tolerance"), [&](RunConfig& c) { c.tol = f.tol; });
  add(sub->add_option("--R-list", f.R_list, "truncation radii in units of R0")->delimiter(','),
      [&](RunConfig& c) { c.R_list = f.R_list; });
  add(sub->add_option("--l-max", f.l_max, "largest Fourier mode"), [&](RunConfig& c) { c.l_max = f.l_max; });
  add(sub->add_option("--target", f.target, "sigma0 | profile"), [&](RunConfig& c) { c.target = f.target; });
  add(sub->add_option("--t0-fractions", f.t0_fractions, "sweep t0 values as fractions of R0")
          ->delimiter(','),
      [&](RunConfig& c) { c.t0_fractions = f.t0_fractions; });
  add(sub->add_option("--k-grid", f.k_grid, "sweep k values")->delimiter(','),
      [&](RunConfig& c) { c.k_grid = f.k_grid; });
  add(sub->add_option("--m-grid", f.m_grid, "sweep m values")->delimiter(','),
      [&](RunConfig& c) { c.m_grid = f.m_grid; });
  add(sub->add_flag("--with-index", f.with_index, "add the slab index to sweep rows"),
      [&](RunConfig& c) { c.with_index = f.with_index; });
  add(sub->add_option("--angles", f.angles, "mesh angular resolution"),
      [&](RunConfig& c) { c.angles = f.angles; });
  add(sub->add_option("--samples", f.samples, "mesh rows (0 keeps all points)"),
      [&](RunConfig& c) { c.samples = f.samples; });
  add(sub->add_option("--jobs", f.jobs, "concurrent solves"), [&](RunConfig& c) { c.jobs = f.jobs; });
  add(sub->add_option("--out", f.out, "output file (default stdout)"), [&](RunConfig& c) { c.out = f.out; });
  add(sub->add_option("--format", f.format, "csv | json | obj"), [&](RunConfig& c) { c.format = f.format; });
  return b;
}

double parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError(std::string(what) + " '" + s + "' is not a number");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free-boundary minimal hypersurfaces of revolution in conformally flat spaces"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<Bound> bound;
  for (const char* name : {"profile", "bounds", "curvature", "index", "sweep", "mesh"}) {
    bound.push_back(add_flags(app.add_subcommand(name), flags));
  }
  bound[0].app->description("solve a profile; CSV of (t, x, xp, psi, Hbar_residual) plus a JSON summary");
  bound[1].app->description("height bound h0 as JSON");
  bound[2].app->description("curvatures and cumulative total curvature as CSV, or totals as JSON");
  bound[3].app->description("Morse index of the slab (sigma0) or of a solved profile as JSON");
  bound[4].app->description("grid over t0 fractions, k and m; one CSV row per point");
  bound[5].app->description("OBJ mesh of the surface of revolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return 2;
  }

  try {
    const Bound* active = nullptr;
    for (const auto& b : bound) {
      if (b.app->parsed()) active = &b;
    }
    RunConfig config;
    if (!flags.config.empty()) config = config_from_json(read_file(flags.config));
    config.command = active->app->get_name();
    const auto& pos = flags.positional;
    if (!pos.empty()) config.metric.kind = pos[0];
    if (pos.size() > 1) config.metric.n = static_cast<int>(parse_number(pos[1], "n"));
    if (pos.size() > 2) config.metric.k = parse_number(pos[2], "k");
    if (pos.size() > 3) config.metric.m = parse_number(pos[3], "m");
    for (const auto& [opt, set] : active->setters) {
      if (opt->count() > 0) set(config);
    }
    return execute(config, out, err);
  } catch (const DomainError& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace fbmin::cli
