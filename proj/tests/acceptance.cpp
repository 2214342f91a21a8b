// Acceptance checks. Each criterion prints one line starting with PASS or
// FAIL. Usage: acceptance [--criterion N]; without arguments all run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fbmin/bounds.hpp"
#include "fbmin/cli.hpp"
#include "fbmin/geometry.hpp"
#include "fbmin/metrics.hpp"
#include "fbmin/numerics.hpp"
#include "fbmin/profile.hpp"
#include "fbmin/spectral.hpp"

using namespace fbmin;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const std::vector<double> fractions{0.1, 0.3, 0.5, 0.7, 0.9};

// Catenoid x = cosh t from (0, 1, 0) in the flat metric.
Outcome criterion1() {
  Clock clock;
  const auto g = metrics::flat_metric(3);
  profile::ProfileSettings s;
  s.t_max = 3.0;
  const auto curve = profile::solve_profile_from(g, 0.0, 1.0, 0.0, s);
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& p = curve.samples[i];
    worst = std::max(worst, std::abs(p.x - std::cosh(p.t)));
    if (i + 1 == curve.samples.size()) break;
    // Dense check between accepted steps through the quintic interpolant.
    const auto& q = curve.samples[i + 1];
    for (int j = 1; j < 8; ++j) {
      const double t = p.t + (q.t - p.t) * j / 8.0;
      const auto v = numerics::hermite_quintic(p.t, q.t, {p.x, p.xp, profile::rhs(g, p.t, p.x, p.xp)},
                                               {q.x, q.xp, profile::rhs(g, q.t, q.x, q.xp)}, t);
      worst = std::max(worst, std::abs(v.y - std::cosh(t)));
    }
  }
  const double t_end = curve.samples.back().t;
  const double secs = clock.seconds();
  const bool pass = worst <= 1e-8 && std::abs(t_end - 3.0) < 1e-12 &&
                    curve.termination.kind == profile::TerminationKind::reached_tmax && secs < 1.0;
  return {pass, "max |x - cosh t| on [0, 3] = " + fmt(worst) + ", t_end = " + fmt(t_end) +
                    ", " + fmt(secs) + " s"};
}

struct Config {
  int n;
  double k;
  double m;
  double t0;
};

std::vector<Config> random_configs() {
  std::mt19937_64 rng(20260401);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Config> out;
  const int dims[3] = {3, 4, 5};
  for (int i = 0; i < 20; ++i) {
    const int n = dims[i % 3];
    const double k_hi = std::min(2.0, 0.5 * n - 0.1);
    const double k = 1.0 + (k_hi - 1.0) * unit(rng);
    const double m = 0.5 + 3.5 * unit(rng);
    const double R0 = metrics::horizon_radius(n, k, m);
    const double t0 = (0.05 + 0.9 * unit(rng)) * R0;
    out.push_back({n, k, m, t0});
  }
  return out;
}

struct Solved {
  Config c;
  profile::ProfileCurve curve;
};

std::vector<Solved> solve_random() {
  std::vector<Solved> out;
  for (const Config& c : random_configs()) {
    const auto g = metrics::schwarzschild_metric(c.n, c.k, c.m);
    out.push_back({c, profile::solve_profile(g, c.t0)});
  }
  return out;
}

// |Hbar| <= 1e-7 (1 + |k1|) at every accepted step of both parametrizations.
Outcome criterion2() {
  Clock clock;
  double worst = 0.0;
  std::size_t points = 0;
  for (const auto& [c, curve] : solve_random()) {
    const auto g = metrics::schwarzschild_metric(c.n, c.k, c.m);
    const double limit = curve.parametrization_switch.value_or(std::numeric_limits<double>::infinity());
    auto check = [&](const geometry::CurvePoint& p) {
      const auto k = geometry::conformal_curvatures(g, p);
      worst = std::max(worst, std::abs(k.Hbar) / (1.0 + std::abs(k.k1)));
      ++points;
    };
    for (const auto& s : curve.samples) {
      if (s.t > limit) break;
      check(geometry::from_graph(s.t, s.x, s.xp, profile::rhs(g, s.t, s.x, s.xp)));
    }
    for (const auto& r : curve.radial) {
      check(geometry::from_radial(r.x, r.t, r.tp, profile::radial_rhs(g, r.x, r.t, r.tp)));
    }
  }
  const double secs = clock.seconds();
  const bool pass = worst <= 1e-7 && secs < 30.0;
  return {pass, "20 configurations, " + std::to_string(points) +
                    " samples, max |Hbar|/(1+|k1|) = " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// Psi(t0) = 0, Psi >= 0 and x' > 0 on the graph x(t).
Outcome criterion3() {
  double worst_start = 0.0, min_psi = std::numeric_limits<double>::infinity();
  double min_xp = std::numeric_limits<double>::infinity();
  std::size_t points = 0, continuation = 0;
  for (const auto& [c, curve] : solve_random()) {
    const auto g = metrics::schwarzschild_metric(c.n, c.k, c.m);
    const auto psi = profile::psi_diagnostic(g, curve);
    const auto& s0 = curve.samples.front();
    // Relative to the size of the two cancelling terms.
    worst_start = std::max(worst_start, std::abs(psi.series.front().psi) / (s0.t * s0.xp + s0.x));
    for (std::size_t i = 0; i < curve.samples.size(); ++i) {
      if (i > 0) min_psi = std::min(min_psi, psi.series[i].psi);
      min_xp = std::min(min_xp, curve.samples[i].xp);
      ++points;
    }
    if (curve.turning) {
      for (const auto& r : curve.radial) continuation += r.x > curve.turning->x ? 1 : 0;
    }
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const bool pass = worst_start <= 4.0 * eps && min_psi >= 0.0 && min_xp > 0.0;
  return {pass, "|Psi(t0)| relative = " + fmt(worst_start) + ", min Psi = " + fmt(min_psi) +
                    ", min x' = " + fmt(min_xp) + " over " + std::to_string(points) +
                    " graph samples (" + std::to_string(continuation) +
                    " continuation samples past the horizontal tangent are not a graph over t)"};
}

Outcome criterion4() {
  Clock clock;
  bool n3_ok = true, n4_ok = true;
  std::string detail = "n=3:";
  const double R03 = metrics::horizon_radius(3, 1.0, 2.0);
  const auto g3 = metrics::schwarzschild_metric(3, 1.0, 2.0);
  for (double f : fractions) {
    profile::ProfileSettings s;
    s.t_max = 1e3 * R03;
    const auto curve = profile::solve_profile(g3, f * R03, s);
    const bool ok = curve.termination.kind == profile::TerminationKind::reached_tmax &&
                    curve.max_height >= s.t_max * (1.0 - 1e-12);
    n3_ok = n3_ok && ok;
    detail += " t0=" + fmt(f) + "R0 " + std::string(profile::to_string(curve.termination.kind)) +
              " max t=" + fmt(curve.max_height) + (ok ? "" : " (short of t_max)") + ";";
  }
  detail += " n=4:";
  const double R04 = metrics::horizon_radius(4, 1.0, 2.0);
  const auto g4 = metrics::schwarzschild_metric(4, 1.0, 2.0);
  for (double f : fractions) {
    const auto curve = profile::solve_profile(g4, f * R04);
    const auto hb = bounds::height_bound(4, R04, f * R04);
    const double t_star = curve.turning ? curve.turning->t : curve.termination.t;
    const bool ok = curve.termination.kind == profile::TerminationKind::blowup &&
                    hb.quad_error < 1e-8 && !hb.divergent && t_star <= hb.h0 + 1e-6;
    n4_ok = n4_ok && ok;
    detail += " t0=" + fmt(f) + "R0 t*=" + fmt(t_star) + " h0=" + fmt(hb.h0) + (ok ? "" : " (violated)") +
              ";";
  }
  const double secs = clock.seconds();
  detail += " " + fmt(secs) + " s";
  return {n3_ok && n4_ok && secs < 60.0, detail};
}

Outcome criterion5() {
  const double R0 = metrics::horizon_radius(4, 1.0, 2.0);
  const auto g = metrics::schwarzschild_metric(4, 1.0, 2.0);
  double worst = std::numeric_limits<double>::infinity();
  std::size_t points = 0;
  for (double f : fractions) {
    const double t0 = f * R0;
    const auto curve = profile::solve_profile(g, t0);
    const double h0 = bounds::height_bound(4, R0, t0).h0;
    for (const auto& s : curve.samples) {
      if (s.t <= t0 || s.t >= h0) continue;
      worst = std::min(worst, s.x - bounds::envelope_inverse(4, R0, t0, s.t));
      ++points;
    }
  }
  return {worst >= -1e-9, "min x(t) - u(t) = " + fmt(worst) + " over " + std::to_string(points) +
                              " samples"};
}

Outcome criterion6() {
  const double R0 = metrics::horizon_radius(4, 1.0, 2.0);
  const auto g = metrics::schwarzschild_metric(4, 1.0, 2.0);
  const auto rows = profile::convergence_to_sigma0(g, {0.5 * R0, 0.1 * R0, 0.01 * R0});
  bool decreasing = true;
  std::string detail = "heights";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    detail += " " + fmt(rows[i].height);
    if (i > 0 && !(rows[i].height < rows[i - 1].height)) decreasing = false;
  }
  const double h_small = bounds::height_bound(4, R0, 0.01 * R0).h0;
  const double h_half = bounds::height_bound(4, R0, 0.5 * R0).h0;
  detail += "; h0(0.01 R0) = " + fmt(h_small) + ", h0(0.5 R0) = " + fmt(h_half);
  return {decreasing && h_small < 0.1 * h_half, detail};
}

Outcome criterion7() {
  Clock clock;
  bool pass = true;
  std::string detail;
  for (double k : {1.1, 1.0}) {
    const auto rep = spectral::morse_index_sigma0(k, 2.0, {10.0, 100.0, 1000.0}, 3);
    const std::size_t nr = rep.R_sequence.size();
    const auto count = [&](int l, std::size_t j) { return rep.counts[l * nr + j].count; };
    bool ok = rep.index == 1 && count(0, nr - 1) == 1 && count(0, nr - 2) == 1 && rep.grids_converged;
    for (int l = 1; l <= 3; ++l) ok = ok && count(l, nr - 1) == 0 && count(l, nr - 2) == 0;
    pass = pass && ok;
    detail += "k=" + fmt(k) + " index " + std::to_string(rep.index) + " (l=0 counts " +
              std::to_string(count(0, 0)) + "," + std::to_string(count(0, 1)) + "," +
              std::to_string(count(0, 2)) + ")" +
              (rep.within_hypothesis ? "" : " [outside k in (1, 6/5] hypothesis: " + rep.note + "]") +
              "; ";
  }
  const double secs = clock.seconds();
  detail += fmt(secs) + " s";
  return {pass && secs < 120.0, detail};
}

Outcome criterion8() {
  double worst_forms = 0.0;
  for (double k : {1.0, 1.05, 1.1, 1.2, 1.4, 2.0, 3.0}) {
    for (double m : {0.5, 2.0, 10.0}) {
      const double R0 = spectral::horizon_radius3(k, m);
      for (int i = 0; i <= 200; ++i) {
        const double r = R0 * std::pow(1e6, i / 200.0);
        const double a = spectral::potential_Q(k, m, r);
        const double b = spectral::potential_Q_two_term(k, m, r);
        worst_forms = std::max(worst_forms, std::abs(a - b) / std::abs(a));
      }
    }
  }
  double worst_bound = 0.0;
  bool bound_ok = true;
  for (double k : {1.05, 1.1, 1.15, 1.2}) {
    const double R0 = spectral::horizon_radius3(k, 2.0);
    std::vector<double> grid;
    for (int i = 0; i <= 2000; ++i) grid.push_back(R0 * std::pow(1e6, i / 2000.0));
    const auto chk = spectral::q_bound_check(k, 2.0, grid);
    bound_ok = bound_ok && chk.holds;
    worst_bound = std::max(worst_bound, chk.worst_ratio);
  }
  bool scalar_zero = true;
  for (double m : {0.5, 2.0, 10.0}) {
    const double R0 = spectral::horizon_radius3(1.0, m);
    for (int i = 0; i <= 100; ++i) {
      scalar_zero = scalar_zero && spectral::scalar_curvature_factor(1.0, m, R0 * std::pow(1e4, i / 100.0)) == 0.0;
    }
  }
  const auto rep = spectral::morse_index_sigma0(1.1, 2.0, {10.0, 100.0, 1000.0}, 3);
  const bool pass = worst_forms <= 1e-12 && bound_ok && scalar_zero && rep.identity_residual <= 1e-6;
  return {pass, "Q forms rel diff " + fmt(worst_forms) + "; max Q r^2/(3/4) = " + fmt(worst_bound) +
                    "; scalar factor at k=1 " + (scalar_zero ? "identically 0" : "nonzero") +
                    "; ground-mode identity residual " + fmt(rep.identity_residual)};
}

Outcome criterion9() {
  double worst_start = 0.0, worst_identity = 0.0;
  for (double k : {1.0, 1.1}) {
    const double m = 2.0;
    const double R0 = spectral::horizon_radius3(k, m);
    for (int l : {1, 2}) {
      const double alpha2 = 4.0 * l * l - 3.0;
      const double g0 = spectral::riccati_floor(k, m, l, R0);
      worst_start = std::max(worst_start, std::abs(g0 - 1.0 / (2.0 * R0)) * 2.0 * R0);
      for (int i = 0; i < 100; ++i) {
        const double r = R0 * std::pow(1e4, i / 99.0);
        const double g = spectral::riccati_floor(k, m, l, r);
        const double gp = spectral::riccati_floor_prime(k, m, l, r);
        worst_identity = std::max(worst_identity, std::abs(gp + g * g - (alpha2 - 1.0) / (4.0 * r * r)));
      }
    }
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {worst_start <= 2.0 * eps && worst_identity <= 1e-8,
          "|g(R0) 2R0 - 1| = " + fmt(worst_start) + "; max |g' + g^2 - (alpha^2-1)/(4r^2)| = " +
              fmt(worst_identity)};
}

Outcome criterion10() {
  // Full catenoid x = cosh t on [-T, T]; 8 pi tanh T -> 8 pi.
  const double T = 12.0;
  geometry::Segment seg{geometry::Parametrization::graph_over_t, {}};
  for (int i = 0; i <= 2400; ++i) {
    const double t = -T + 2.0 * T * i / 2400.0;
    seg.points.push_back({t, std::cosh(t), std::sinh(t), std::cosh(t)});
  }
  const auto cat = geometry::total_curvature_segments(metrics::flat_metric(3), {seg});
  const double oracle = 8.0 * std::numbers::pi;
  const double cat_err = std::abs(cat.flat_total - oracle) / oracle;

  const auto g = metrics::schwarzschild_metric(3, 1.0, 2.0);
  const auto curve = profile::solve_profile(g, 0.5);
  const auto rep = geometry::total_curvature(g, curve);
  const auto& ps = rep.conf_partials;
  const double last = ps.size() >= 2 ? ps.back().value - ps[ps.size() - 2].value
                                     : std::numeric_limits<double>::infinity();
  const double reach = ps.empty() ? 0.0 : ps.back().cutoff;
  const bool pass = cat_err <= 1e-4 && rep.converged && std::abs(last) < 1e-4 * rep.conf_total &&
                    reach >= 1e3;
  return {pass, "catenoid rel err " + fmt(cat_err) + "; Schwarzschild conf_total " +
                    fmt(rep.conf_total) + ", last decade of |X| adds " + fmt(last / rep.conf_total) +
                    " of it, cutoffs to |X| = " + fmt(reach) + " (height stays below " +
                    fmt(curve.max_height) + ", so decades are taken in |X|, not t)"};
}

std::string sweep_output(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"fbmin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();
  return out.str();
}

Outcome criterion11() {
  const std::vector<std::vector<std::string>> runs{
      {"sweep", "--n", "4", "--k-grid", "1,1.2", "--m-grid", "1,2", "--t0-fractions", "0.1,0.3,0.5,0.7,0.9"},
      {"sweep", "--n", "3", "--k-grid", "1.05,1.1,1.15,1.2", "--with-index"},
  };
  bool pass = true;
  std::size_t bytes = 0;
  for (const auto& base : runs) {
    std::vector<std::string> outputs;
    for (const char* jobs : {"1", "8", "1", "8"}) {
      auto args = base;
      args.push_back("--jobs");
      args.push_back(jobs);
      outputs.push_back(sweep_output(args));
    }
    for (const auto& o : outputs) pass = pass && o == outputs.front() && o.rfind("exit", 0) != 0;
    bytes += outputs.front().size();
  }
  return {pass, "two sweeps, each run twice with --jobs 1 and twice with --jobs 8; " +
                    std::to_string(bytes) + " bytes compared"};
}

const std::vector<std::function<Outcome()>> criteria{
    criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
    criterion7, criterion8, criterion9, criterion10, criterion11};

bool report(int i) {
  Outcome o;
  try {
    o = criteria[i - 1]();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s C%d: %s\n", o.pass ? "PASS" : "FAIL", i, o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::strcmp(argv[1], "--criterion") == 0) {
    const int i = std::atoi(argv[2]);
    if (i < 1 || i > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
      return 2;
    }
    return report(i) ? 0 : 1;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
    return 2;
  }
  bool all = true;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) all = report(i) && all;
  return all ? 0 : 1;
}
