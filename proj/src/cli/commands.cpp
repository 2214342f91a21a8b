#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "fbmin/bounds.hpp"
#include "fbmin/cli.hpp"
#include "fbmin/errors.hpp"
#include "fbmin/geometry.hpp"
#include "fbmin/profile.hpp"
#include "fbmin/spectral.hpp"

namespace fbmin::cli {

namespace {

using nlohmann::json;

// Non-finite values become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

void write_to(const std::string& path, std::ostream& fallback,
              const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DomainError("cannot open output file '" + path + "'");
  fn(file);
  if (!file) throw NumericalError("failed writing output file '" + path + "'");
}

std::string pick_format(const RunConfig& c, const std::string& fallback,
                        std::initializer_list<const char*> allowed) {
  const std::string f = c.format.empty() ? fallback : c.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw DomainError("format '" + f + "' is not available for " + c.command);
}

profile::ProfileSettings profile_settings(const RunConfig& c) {
  profile::ProfileSettings s;
  s.t_max = c.t_max;
  s.x_max = c.x_max;
  s.slope_threshold = c.slope_threshold;
  s.ode.rel_tol = c.tol;
  s.ode.abs_tol = c.tol / 100.0;
  return s;
}

// max |Hbar| / (1 + |k1|) over the graph samples.
double residual_max(const metrics::ConformalMetric& g, const profile::ProfileCurve& curve) {
  double worst = 0.0;
  for (const auto& s : curve.samples) {
    const auto p = geometry::from_graph(s.t, s.x, s.xp, profile::rhs(g, s.t, s.x, s.xp));
    const auto c = geometry::conformal_curvatures(g, p);
    worst = std::max(worst, std::abs(c.Hbar) / (1.0 + std::abs(c.k1)));
  }
  return worst;
}

std::optional<double> t_star(const profile::ProfileCurve& curve) {
  if (curve.termination.kind != profile::TerminationKind::blowup) return std::nullopt;
  return curve.turning ? curve.turning->t : curve.termination.t;
}

json profile_summary(const RunConfig& c, const metrics::ConformalMetric& g,
                     const profile::ProfileCurve& curve) {
  const auto psi = profile::psi_diagnostic(g, curve);
  json turning = nullptr;
  if (curve.turning) turning = {{"x", curve.turning->x}, {"t", curve.turning->t}};
  return {{"metric", c.metric.kind},
          {"n", g.n()},
          {"R0", g.boundary_radius()},
          {"t0", c.t0},
          {"termination", std::string(profile::to_string(curve.termination.kind))},
          {"slope_singularity", curve.termination.slope_singularity},
          {"t_star", optional_number(t_star(curve))},
          {"t_max", c.t_max},
          {"t_end", number(curve.termination.t)},
          {"x_end", number(curve.termination.x)},
          {"max_height", number(curve.max_height)},
          {"asymptotic_height", optional_number(curve.asymptotic_height)},
          {"turning", turning},
          {"parametrization_switch", optional_number(curve.parametrization_switch)},
          {"max_residual", number(residual_max(g, curve))},
          {"min_psi", number(psi.min_psi)},
          {"graph_samples", curve.samples.size()},
          {"radial_samples", curve.radial.size()},
          {"detail", one_line(curve.termination.detail)}};
}

int cmd_profile(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const std::string format = pick_format(c, "csv", {"csv", "json"});
  const auto g = make_metric(c.metric);
  const auto curve = profile::solve_profile(g, c.t0, profile_settings(c));
  const json summary = profile_summary(c, g, curve);
  if (format == "json") {
    write_to(c.out, out, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
    return 0;
  }
  const auto psi = profile::psi_diagnostic(g, curve);
  write_to(c.out, out, [&](std::ostream& os) {
    os << "t,x,xp,psi,Hbar_residual\n";
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
      const auto& s = curve.samples[i];
      const auto p = geometry::from_graph(s.t, s.x, s.xp, profile::rhs(g, s.t, s.x, s.xp));
      const double hbar = geometry::conformal_curvatures(g, p).Hbar;
      os << format_number(s.t) << ',' << format_number(s.x) << ',' << format_number(s.xp) << ','
         << format_number(psi.series[i].psi) << ',' << format_number(hbar) << '\n';
    }
  });
  if (c.out.empty()) {
    err << summary.dump() << '\n';
  } else {
    write_to(c.out + ".summary.json", out,
             [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  }
  return 0;
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
  pick_format(c, "json", {"json"});
  const auto g = make_metric(c.metric);
  const auto hb = bounds::height_bound(g.n(), g.boundary_radius(), c.t0);
  const json j{{"n", hb.n},   {"R0", hb.R0},
               {"t0", hb.t0}, {"h0", number(hb.h0)},
               {"quad_error", number(hb.quad_error)}, {"divergent", hb.divergent}};
  write_to(c.out, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return 0;
}

int cmd_curvature(const RunConfig& c, std::ostream& out) {
  const std::string format = pick_format(c, "csv", {"csv", "json"});
  const auto g = make_metric(c.metric);
  const auto curve = profile::solve_profile(g, c.t0, profile_settings(c));
  const auto points = geometry::curve_points(g, curve);
  std::optional<geometry::CurvatureReport> report;
  if (g.n() == 3) report = geometry::total_curvature(g, curve);

  if (format == "json") {
    json j{{"n", g.n()}, {"t0", c.t0}};
    if (report) {
      const auto list = [](const std::vector<geometry::Partial>& ps) {
        json arr = json::array();
        for (const auto& p : ps) arr.push_back({{"cutoff", number(p.cutoff)}, {"value", number(p.value)}});
        return arr;
      };
      j["flat_total"] = number(report->flat_total);
      j["conf_total"] = number(report->conf_total);
      j["partials"] = list(report->partials);
      j["conf_partials"] = list(report->conf_partials);
      j["tail_estimate"] = number(report->tail_estimate);
      j["converged"] = report->converged;
    } else {
      j["note"] = "total curvature is defined for n = 3 only";
    }
    write_to(c.out, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return 0;
  }
  write_to(c.out, out, [&](std::ostream& os) {
    os << "t,k1,k_rot,kbar1,kbar_rot,Hbar,partial_total\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto s = geometry::conformal_curvatures(g, points[i]);
      const double partial = report ? report->cumulative[i] : std::numeric_limits<double>::quiet_NaN();
      os << format_number(s.t) << ',' << format_number(s.k1) << ',' << format_number(s.k_rot) << ','
         << format_number(s.kbar[0]) << ',' << format_number(s.kbar[1]) << ','
         << format_number(s.Hbar) << ',' << format_number(partial) << '\n';
    }
  });
  return 0;
}

json index_json(const spectral::IndexReport& rep) {
  json modes = json::array();
  for (const auto& m : rep.counts) {
    modes.push_back({{"l", m.l},
                     {"R", m.R},
                     {"count", m.count},
                     {"smallest", number(m.smallest)},
                     {"grid", m.grid},
                     {"converged", m.converged}});
  }
  return {{"k", rep.k},
          {"m", rep.m},
          {"condition_311", rep.condition_311},
          {"within_hypothesis", rep.within_hypothesis},
          {"per_mode", modes},
          {"index", rep.index},
          {"stabilized", rep.stabilized},
          {"monotone", rep.monotone},
          {"grids_converged", rep.grids_converged},
          {"identity_residual", number(rep.identity_residual)},
          {"note", rep.note}};
}

std::vector<double> absolute_radii(const RunConfig& c, double R0) {
  std::vector<double> out;
  for (double r : c.R_list) out.push_back(r * R0);
  return out;
}

int cmd_index(const RunConfig& c, std::ostream& out) {
  pick_format(c, "json", {"json"});
  const auto g = make_metric(c.metric);
  const double R0 = g.boundary_radius();
  spectral::IndexReport rep;
  if (c.target == "sigma0") {
    rep = spectral::morse_index_sigma0(c.metric.k, c.metric.m, absolute_radii(c, R0), c.l_max, {},
                                       c.jobs);
  } else {
    const auto curve = profile::solve_profile(g, c.t0, profile_settings(c));
    rep = spectral::morse_index_profile(g, curve, c.l_max, absolute_radii(c, R0), {}, c.jobs);
  }
  json j = index_json(rep);
  j["target"] = c.target;
  j["R0"] = R0;
  if (c.target == "profile") j["t0"] = c.t0;
  write_to(c.out, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return 0;
}

// Runs fn(i) for i in [0, count) on up to jobs threads. fn must not throw.
void parallel_rows(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct SweepRow {
  double k = 0.0;
  double m = 0.0;
  std::optional<double> fraction;
  // Filled by the workers; only the collector formats them.
  double R0 = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> t0;
  std::string termination;
  std::optional<double> height;
  std::optional<double> h0;
  std::optional<double> residual;
  std::optional<int> index;
  std::string error;
};

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const std::string format = pick_format(c, "csv", {"csv", "json"});
  const int n = c.metric.n;
  const std::vector<double> ks = c.k_grid.empty() ? std::vector<double>{c.metric.k} : c.k_grid;
  const std::vector<double> ms = c.m_grid.empty() ? std::vector<double>{c.metric.m} : c.m_grid;

  std::vector<SweepRow> rows;
  for (double k : ks) {
    for (double m : ms) {
      if (c.t0_fractions.empty()) {
        SweepRow r;
        r.k = k;
        r.m = m;
        rows.push_back(r);
      } else {
        for (double f : c.t0_fractions) {
          SweepRow r;
          r.k = k;
          r.m = m;
          r.fraction = f;
          rows.push_back(r);
        }
      }
    }
  }

  // Index per (k, m) pair, computed once.
  struct IndexCell {
    double k, m;
    std::optional<int> index;
    std::string error;
  };
  std::vector<IndexCell> index_cells;
  if (c.with_index) {
    for (double k : ks) {
      for (double m : ms) index_cells.push_back({k, m, std::nullopt, {}});
    }
    parallel_rows(index_cells.size(), c.jobs, [&](std::size_t i) {
      auto& cellv = index_cells[i];
      try {
        const double R0 = metrics::horizon_radius(n, cellv.k, cellv.m);
        cellv.index = spectral::morse_index_sigma0(cellv.k, cellv.m, absolute_radii(c, R0), c.l_max)
                          .index;
      } catch (const std::exception& e) {
        cellv.error = one_line(e.what());
      }
    });
  }

  const auto settings = profile_settings(c);
  parallel_rows(rows.size(), c.jobs, [&](std::size_t i) {
    SweepRow& r = rows[i];
    try {
      const auto g = metrics::schwarzschild_metric(n, r.k, r.m);
      r.R0 = g.boundary_radius();
      if (r.fraction) {
        r.t0 = *r.fraction * r.R0;
        const auto curve = profile::solve_profile(g, *r.t0, settings);
        r.termination = std::string(profile::to_string(curve.termination.kind));
        r.height = curve.max_height;
        r.h0 = bounds::height_bound(n, r.R0, *r.t0).h0;
        r.residual = residual_max(g, curve);
      }
    } catch (const std::exception& e) {
      r.error = one_line(e.what());
    }
  });
  if (c.with_index) {
    std::size_t j = 0;
    for (double k : ks) {
      for (double m : ms) {
        const IndexCell& ic = index_cells[j++];
        for (auto& r : rows) {
          if (r.k != k || r.m != m) continue;
          r.index = ic.index;
          if (!ic.error.empty()) r.error += (r.error.empty() ? "" : "; ") + ("index: " + ic.error);
        }
      }
    }
  }

  // Single collector: rows are written in grid order after all workers finish.
  write_to(c.out, out, [&](std::ostream& os) {
    if (format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        arr.push_back({{"n", n},
                       {"k", r.k},
                       {"m", r.m},
                       {"R0", number(r.R0)},
                       {"t0", optional_number(r.t0)},
                       {"termination", r.termination},
                       {"height", optional_number(r.height)},
                       {"h0", optional_number(r.h0)},
                       {"residual_max", optional_number(r.residual)},
                       {"index", r.index ? json(*r.index) : json(nullptr)},
                       {"error", r.error}});
      }
      os << arr.dump(2) << '\n';
      return;
    }
    os << "n,k,m,R0,t0,termination,height,h0,residual_max,index,error\n";
    for (const auto& r : rows) {
      os << n << ',' << format_number(r.k) << ',' << format_number(r.m) << ','
         << format_number(r.R0) << ',' << cell(r.t0) << ',' << r.termination << ','
         << cell(r.height) << ',' << cell(r.h0) << ',' << cell(r.residual) << ','
         << (r.index ? std::to_string(*r.index) : "") << ',' << csv_field(r.error) << '\n';
    }
  });
  return 0;
}

int cmd_mesh(const RunConfig& c, std::ostream& out) {
  pick_format(c, "obj", {"obj"});
  const auto g = make_metric(c.metric);
  const auto curve = profile::solve_profile(g, c.t0, profile_settings(c));
  const auto points = geometry::curve_points(g, curve);
  std::vector<std::pair<double, double>> xt;
  if (c.samples == 0) {
    for (const auto& p : points) xt.emplace_back(p.x, p.t);
  } else {
    if (static_cast<std::size_t>(c.samples) > points.size()) {
      throw DomainError("samples = " + std::to_string(c.samples) + " exceeds the " +
                        std::to_string(points.size()) + " profile points");
    }
    for (int i = 0; i < c.samples; ++i) {
      const std::size_t k = static_cast<std::size_t>(
          std::llround(static_cast<double>(i) * (points.size() - 1) / (c.samples - 1)));
      xt.emplace_back(points[k].x, points[k].t);
    }
  }
  const Mesh mesh = revolve(xt, c.angles);
  write_to(c.out, out, [&](std::ostream& os) { write_obj(os, mesh); });
  return 0;
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const std::string& cmd = config.command;
    if (cmd == "profile") return cmd_profile(config, out, err);
    if (cmd == "bounds") return cmd_bounds(config, out);
    if (cmd == "curvature") return cmd_curvature(config, out);
    if (cmd == "index") return cmd_index(config, out);
    if (cmd == "sweep") return cmd_sweep(config, out);
    return cmd_mesh(config, out);
  } catch (const DomainError& e) {
    err << "error: invalid input: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace fbmin::cli
