#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

#include "fbmin/cli.hpp"
#include "fbmin/errors.hpp"

namespace fbmin::cli {

namespace {

using nlohmann::json;

const std::set<std::string> commands{"profile", "bounds", "curvature", "index", "sweep", "mesh"};

template <typename T>
void read(const json& obj, const char* key, T& target) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    throw DomainError(std::string("config field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const char* where) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key())) {
      throw DomainError(std::string("unknown config key '") + item.key() + "' in " + where);
    }
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

void require_finite(double v, const char* name) {
  require(std::isfinite(v), std::string(name) + " must be finite");
}

}  // namespace

std::string to_json(const RunConfig& c) {
  json metric{{"kind", c.metric.kind}, {"n", c.metric.n},       {"k", c.metric.k},
              {"m", c.metric.m},       {"beta", c.metric.beta}, {"r0", c.metric.r0}};
  json j{{"command", c.command},
         {"metric", metric},
         {"t0", c.t0},
         {"t_max", c.t_max},
         {"x_max", c.x_max},
         {"slope_threshold", c.slope_threshold},
         {"tol", c.tol},
         {"R_list", c.R_list},
         {"l_max", c.l_max},
         {"target", c.target},
         {"t0_fractions", c.t0_fractions},
         {"k_grid", c.k_grid},
         {"m_grid", c.m_grid},
         {"with_index", c.with_index},
         {"angles", c.angles},
         {"samples", c.samples},
         {"jobs", c.jobs},
         {"out", c.out},
         {"format", c.format}};
  return j.dump(2);
}

RunConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  reject_unknown(j,
                 {"command", "metric", "t0", "t_max", "x_max", "slope_threshold", "tol", "R_list",
                  "l_max", "target", "t0_fractions", "k_grid", "m_grid", "with_index", "angles",
                  "samples", "jobs", "out", "format"},
                 "config");
  RunConfig c;
  if (const auto it = j.find("metric"); it != j.end()) {
    require(it->is_object(), "config field 'metric' must be an object");
    reject_unknown(*it, {"kind", "n", "k", "m", "beta", "r0"}, "metric");
    read(*it, "kind", c.metric.kind);
    read(*it, "n", c.metric.n);
    read(*it, "k", c.metric.k);
    read(*it, "m", c.metric.m);
    read(*it, "beta", c.metric.beta);
    read(*it, "r0", c.metric.r0);
  }
  read(j, "command", c.command);
  read(j, "t0", c.t0);
  read(j, "t_max", c.t_max);
  read(j, "x_max", c.x_max);
  read(j, "slope_threshold", c.slope_threshold);
  read(j, "tol", c.tol);
  read(j, "R_list", c.R_list);
  read(j, "l_max", c.l_max);
  read(j, "target", c.target);
  read(j, "t0_fractions", c.t0_fractions);
  read(j, "k_grid", c.k_grid);
  read(j, "m_grid", c.m_grid);
  read(j, "with_index", c.with_index);
  read(j, "angles", c.angles);
  read(j, "samples", c.samples);
  read(j, "jobs", c.jobs);
  read(j, "out", c.out);
  read(j, "format", c.format);
  return c;
}

void validate(const RunConfig& c) {
  require(commands.count(c.command) == 1, "unknown command '" + c.command + "'");
  const MetricSpec& g = c.metric;
  require(g.kind == "schwarzschild" || g.kind == "cylinder" || g.kind == "beta" || g.kind == "flat",
          "unknown metric kind '" + g.kind + "'");
  require(g.n >= 3, "dimension n must be at least 3");
  require_finite(g.k, "k");
  require_finite(g.m, "m");
  require_finite(g.beta, "beta");
  require_finite(g.r0, "r0");
  if (g.kind == "cylinder") require(g.n == 3, "the cylinder metric is defined for n = 3");
  // Metric-specific preconditions are enforced by the constructors.
  (void)make_metric(g);

  for (double v : {c.t0, c.t_max, c.x_max, c.slope_threshold, c.tol}) require_finite(v, "numeric field");
  require(c.t_max > 0.0, "t_max must be positive");
  require(c.x_max > 0.0, "x_max must be positive");
  require(c.slope_threshold > 1.0, "slope_threshold must exceed 1");
  require(c.tol > 0.0 && c.tol < 1e-2, "tol must lie in (0, 1e-2)");
  require(c.jobs >= 1 && c.jobs <= 256, "jobs must lie in [1, 256]");
  require(c.l_max >= 0, "l_max must be nonnegative");
  require(c.target == "sigma0" || c.target == "profile", "target must be sigma0 or profile");
  require(c.angles >= 8, "mesh needs at least 8 angles");
  require(c.samples == 0 || c.samples >= 2, "samples must be 0 (all) or at least 2");
  require(c.format.empty() || c.format == "csv" || c.format == "json" || c.format == "obj",
          "format must be csv, json or obj");
  for (std::size_t i = 0; i < c.R_list.size(); ++i) {
    require(std::isfinite(c.R_list[i]) && c.R_list[i] > 1.0, "R_list entries must exceed 1 (units of R0)");
    require(i == 0 || c.R_list[i] > c.R_list[i - 1], "R_list must be strictly increasing");
  }
  for (double f : c.t0_fractions) {
    require(std::isfinite(f) && f > 0.0 && f < 1.0, "t0 fractions must lie in (0, 1)");
  }
  for (double k : c.k_grid) require(std::isfinite(k) && k >= 1.0, "k grid values must be >= 1");
  for (double m : c.m_grid) require(std::isfinite(m) && m > 0.0, "m grid values must be positive");

  const bool needs_t0 = c.command == "profile" || c.command == "bounds" ||
                        c.command == "curvature" || c.command == "mesh" ||
                        (c.command == "index" && c.target == "profile");
  if (needs_t0) {
    const double R0 = make_metric(g).boundary_radius();
    require(R0 > 0.0, "metric has no boundary sphere; t0 needs a horizon radius R0 > 0");
    require(c.t0 > 0.0 && c.t0 < R0,
            "t0 = " + format_number(c.t0) + " must lie in (0, R0) with R0 = " + format_number(R0));
  }
  if (c.command == "index") {
    require(g.kind == "schwarzschild" && g.n == 3, "index needs a three-dimensional Schwarzschild metric");
    require(!c.R_list.empty(), "R_list is empty");
    if (c.target == "sigma0") require(c.l_max >= 3, "l_max must be at least 3");
  }
  if (c.command == "sweep") {
    require(!c.t0_fractions.empty() || !c.k_grid.empty() || !c.m_grid.empty(), "sweep grid is empty");
    require(g.kind == "schwarzschild", "sweep varies Schwarzschild parameters");
    if (c.with_index) {
      require(g.n == 3, "index sweeps need n = 3");
      require(!c.R_list.empty(), "R_list is empty");
      require(c.l_max >= 3, "l_max must be at least 3");
    }
  }
}

metrics::ConformalMetric make_metric(const MetricSpec& g) {
  if (g.kind == "schwarzschild") return metrics::schwarzschild_metric(g.n, g.k, g.m);
  if (g.kind == "cylinder") return metrics::cylinder_metric(g.r0);
  if (g.kind == "beta") return metrics::beta_metric(g.beta, g.n, g.r0);
  if (g.kind == "flat") return metrics::flat_metric(g.n);
  throw DomainError("unknown metric kind '" + g.kind + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace fbmin::cli
