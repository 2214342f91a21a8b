#pragma once

// Command-line front end. A run is described by a RunConfig, which can come
// from a JSON file, from flags, or both (flags win).

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fbmin/metrics.hpp"

namespace fbmin::cli {

struct MetricSpec {
  /// schwarzschild | cylinder | beta | flat
  std::string kind = "schwarzschild";
  int n = 3;
  double k = 1.0;
  double m = 2.0;
  double beta = 0.5;
  /// Boundary sphere radius for cylinder and beta metrics.
  double r0 = 1.0;

  bool operator==(const MetricSpec&) const = default;
};

struct RunConfig {
  /// profile | bounds | curvature | index | sweep | mesh
  std::string command = "profile";
  MetricSpec metric;
  double t0 = 0.5;
  double t_max = 1e3;
  double x_max = 1e6;
  double slope_threshold = 1e3;
  /// Relative ODE tolerance; the absolute tolerance is tol / 100.
  double tol = 1e-10;
  /// Truncation radii in units of R0.
  std::vector<double> R_list{10.0, 100.0, 1000.0};
  int l_max = 3;
  /// sigma0 | profile
  std::string target = "sigma0";
  /// Sweep grids. t0 values are fractions of R0.
  std::vector<double> t0_fractions;
  std::vector<double> k_grid;
  std::vector<double> m_grid;
  bool with_index = false;
  int angles = 64;
  /// Mesh rows; 0 keeps every profile point.
  int samples = 0;
  int jobs = 1;
  /// Output path; empty writes to stdout.
  std::string out;
  /// csv | json | obj; empty picks the command default.
  std::string format;

  bool operator==(const RunConfig&) const = default;
};

std::string to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys and type mismatches throw DomainError.
RunConfig config_from_json(std::string_view text);

/// Checks every field against the preconditions of the module it feeds.
void validate(const RunConfig& config);

metrics::ConformalMetric make_metric(const MetricSpec& spec);

/// Shortest decimal that parses back to the same double; "inf", "-inf", "nan".
std::string format_number(double v);

struct Mesh {
  std::vector<std::array<double, 3>> vertices;
  /// Zero-based vertex indices, counterclockwise seen from outside.
  std::vector<std::array<int, 3>> faces;
};

/// Surface of revolution of (x, t) points about the t axis:
/// vertex (i, j) = (x_i cos theta_j, x_i sin theta_j, t_i). Points must be
/// ordered along the curve; needs at least 2 points and 8 angles.
Mesh revolve(const std::vector<std::pair<double, double>>& profile_xt, int angles);

/// OBJ text with one-based "v" and "f" records.
void write_obj(std::ostream& os, const Mesh& mesh);

/// Runs a validated config; primary output goes to config.out or to out.
/// Returns the process exit code: 0, 1 for numerical failures, 2 for invalid input.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs. Errors are reported as one line on err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbmin::cli
