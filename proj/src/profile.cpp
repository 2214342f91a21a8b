#include "fbmin/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fbmin/errors.hpp"

namespace fbmin::profile {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

// Non-throwing variants for use inside the integrator; NaN makes it reject the step.
double graph_rhs_raw(const ConformalMetric& g, double t, double x, double xp) {
  if (!(x > 0.0)) return nan;
  const double up = g.u_prime(x * x + t * t);
  return (-2.0 * (g.n() - 1) * up * (xp * t - x) + (g.n() - 2) / x) * (1.0 + xp * xp);
}

double radial_rhs_raw(const ConformalMetric& g, double x, double t, double tp) {
  if (!(x > 0.0)) return nan;
  const double up = g.u_prime(x * x + t * t);
  return (1.0 + tp * tp) * (2.0 * (g.n() - 1) * up * (t - x * tp) - (g.n() - 2) * tp / x);
}

void validate(const ProfileSettings& s) {
  s.ode.validate();
  if (!(s.slope_threshold > 0.0)) throw DomainError("slope threshold must be positive");
  if (!(s.x_max > 0.0)) throw DomainError("x_max must be positive");
}

Termination failure(double t, double x, numerics::OdeStatus status, std::string where) {
  Termination term;
  term.kind = TerminationKind::step_failure;
  term.t = t;
  term.x = x;
  term.detail = std::move(where) + ": " + std::string(numerics::to_string(status)) +
                " at t = " + std::to_string(t) + ", x = " + std::to_string(x);
  return term;
}

// t at radius x along the radial samples by quintic Hermite interpolation.
double radial_height_at(const ConformalMetric& g, const std::vector<RadialSample>& r, double x) {
  auto it = std::lower_bound(r.begin(), r.end(), x,
                             [](const RadialSample& a, double v) { return a.x < v; });
  if (it == r.begin()) return r.front().t;
  if (it == r.end()) return r.back().t;
  const RadialSample& b = *it;
  const RadialSample& a = *(it - 1);
  const numerics::HermiteValue ha{a.t, a.tp, radial_rhs_raw(g, a.x, a.t, a.tp)};
  const numerics::HermiteValue hb{b.t, b.tp, radial_rhs_raw(g, b.x, b.t, b.tp)};
  return numerics::hermite_quintic(a.x, b.x, ha, hb, x).y;
}

// Planar ends satisfy t = t_inf + C x^{-(n-3)} to leading order.
std::optional<double> extrapolate_height(const ConformalMetric& g,
                                         const std::vector<RadialSample>& r) {
  if (g.n() < 4 || r.size() < 3) return std::nullopt;
  const double x2 = r.back().x;
  const double x1 = x2 / 10.0;
  if (x1 <= r.front().x) return std::nullopt;
  const double t2 = r.back().t;
  const double t1 = radial_height_at(g, r, x1);
  const double p = g.n() - 3.0;
  return t2 + (t2 - t1) / (std::pow(x2 / x1, p) - 1.0);
}

}  // namespace

double rhs(const ConformalMetric& metric, double t, double x, double xp) {
  if (!(x > 0.0)) throw DomainError("profile ODE needs x > 0");
  return graph_rhs_raw(metric, t, x, xp);
}

double chi(int n, double m, double x, double t) {
  const double s = x * x + t * t;
  return 2.0 * m * (n - 1) / (2.0 * std::pow(s, 0.5 * n) + m * s);
}

double rhs_chi_form(int n, double m, double t, double x, double xp) {
  if (!(x > 0.0)) throw DomainError("profile ODE needs x > 0");
  return (chi(n, m, x, t) * (xp * t - x) + (n - 2) / x) * (1.0 + xp * xp);
}

double radial_rhs(const ConformalMetric& metric, double x, double t, double tp) {
  if (!(x > 0.0)) throw DomainError("profile ODE needs x > 0");
  return radial_rhs_raw(metric, x, t, tp);
}

std::string_view to_string(TerminationKind kind) {
  switch (kind) {
    case TerminationKind::reached_tmax: return "reached_tmax";
    case TerminationKind::reached_xmax: return "reached_xmax";
    case TerminationKind::blowup: return "blowup";
    case TerminationKind::step_failure: return "step_failure";
  }
  return "step_failure";
}

InitialData initial_conditions(const ConformalMetric& metric, double t0) {
  const double R0 = metric.boundary_radius();
  if (!(R0 > 0.0)) throw DomainError("metric has no boundary sphere (R0 = 0)");
  if (!(t0 > 0.0 && t0 < R0)) {
    throw DomainError("t0 must lie in (0, R0) with R0 = " + std::to_string(R0));
  }
  if (t0 < 1e-6 * R0 || t0 > (1.0 - 1e-6) * R0) {
    throw DomainError("t0 too close to an end of (0, R0); need 1e-6 R0 <= t0 <= (1 - 1e-6) R0");
  }
  InitialData d;
  d.t0 = t0;
  d.x0 = std::sqrt((R0 - t0) * (R0 + t0));
  d.xp0 = d.x0 / t0;
  return d;
}

ProfileCurve solve_profile(const ConformalMetric& metric, double t0,
                           const ProfileSettings& settings) {
  const InitialData d = initial_conditions(metric, t0);
  ProfileCurve curve = solve_profile_from(metric, d.t0, d.x0, d.xp0, settings);
  curve.initial = d;
  return curve;
}

ProfileCurve solve_profile_from(const ConformalMetric& metric, double t_start, double x,
                                double xp, const ProfileSettings& settings) {
  validate(settings);
  if (!(x > 0.0)) throw DomainError("profile needs x > 0 at the start");
  if (!(settings.t_max > t_start)) throw DomainError("t_max must exceed the starting height");
  if (!(settings.x_max > x)) throw DomainError("x_max must exceed the starting radius");

  ProfileCurve curve;
  curve.initial = {t_start, x, xp};
  const bool monotone = xp > 0.0;

  // Phase A: x as a function of t.
  const numerics::SecondOrderRhs rhs_a = [&](double t, double y, double yp) {
    return graph_rhs_raw(metric, t, y, yp);
  };
  const numerics::StopPredicate stop_a = [&](const numerics::OdeSample& s) {
    return s.yp > settings.slope_threshold || s.y >= settings.x_max || (monotone && s.yp <= 0.0);
  };
  const auto a = numerics::integrate_ode(rhs_a, t_start, {x, xp}, settings.t_max,
                                         settings.ode, stop_a);
  for (const auto& s : a.samples) curve.samples.push_back({s.t, s.y, s.yp});
  curve.max_height = curve.samples.back().t;
  const auto& last = a.samples.back();

  if (monotone && last.yp <= 0.0) {
    throw NumericalError("x' <= 0 at t = " + std::to_string(last.t) +
                         " on a monotone profile (integrator fault)");
  }
  if (a.status == numerics::OdeStatus::reached_end) {
    curve.termination = {TerminationKind::reached_tmax, last.t, last.y, false, "t_max reached"};
    return curve;
  }
  if (a.status != numerics::OdeStatus::stopped) {
    curve.termination = failure(last.t, last.y, a.status, "graph x(t)");
    return curve;
  }
  if (last.yp <= settings.slope_threshold) {
    curve.termination = {TerminationKind::reached_xmax, last.t, last.y, false, "x_max reached"};
    return curve;
  }

  // Phase B: t as a function of x.
  curve.parametrization_switch = last.t;
  const numerics::SecondOrderRhs rhs_b = [&](double xx, double t, double tp) {
    return radial_rhs_raw(metric, xx, t, tp);
  };
  const numerics::StopPredicate stop_b = [&](const numerics::OdeSample& s) {
    return s.y >= settings.t_max;
  };
  const numerics::EventFunction turning = [](const numerics::OdeSample& s) { return s.yp; };
  const auto b = numerics::integrate_ode(rhs_b, last.y, {last.t, 1.0 / last.yp}, settings.x_max,
                                         settings.ode, stop_b, turning);
  for (const auto& s : b.samples) curve.radial.push_back({s.t, s.y, s.yp});
  for (std::size_t i = 1; i < b.samples.size(); ++i) {
    const auto& s = b.samples[i];
    if (b.status == numerics::OdeStatus::event && i + 1 == b.samples.size()) break;
    curve.samples.push_back({s.y, s.t, 1.0 / s.yp});
  }
  const auto& end_b = b.samples.back();
  for (const auto& r : curve.radial) curve.max_height = std::max(curve.max_height, r.t);

  switch (b.status) {
    case numerics::OdeStatus::stopped:
      curve.termination = {TerminationKind::reached_tmax, end_b.y, end_b.t, false,
                           "t_max reached in the radial parametrization"};
      return curve;
    case numerics::OdeStatus::reached_end:
      curve.asymptotic_height = extrapolate_height(metric, curve.radial);
      if (metric.n() >= 4 && curve.asymptotic_height) {
        curve.termination = {TerminationKind::blowup, *curve.asymptotic_height, inf, false,
                             "x -> inf below an asymptotic plane"};
      } else {
        curve.termination = {TerminationKind::reached_xmax, end_b.y, end_b.t, false,
                             "x_max reached"};
      }
      return curve;
    case numerics::OdeStatus::event:
      break;
    default:
      curve.termination = failure(end_b.y, end_b.t, b.status, "graph t(x)");
      return curve;
  }

  // Horizontal tangent: x' = inf at finite radius.
  const RadialSample turn{end_b.t, end_b.y, 0.0};
  curve.turning = turn;
  curve.radial.back().tp = 0.0;
  curve.termination = {TerminationKind::blowup, turn.t, turn.x, true,
                       "x' -> inf at finite radius (horizontal tangent)"};
  if (!settings.continue_past_turning || !(settings.x_max > turn.x)) return curve;

  const auto c = numerics::integrate_ode(rhs_b, turn.x, {turn.t, 0.0}, settings.x_max,
                                         settings.ode);
  for (std::size_t i = 1; i < c.samples.size(); ++i) {
    curve.radial.push_back({c.samples[i].t, c.samples[i].y, c.samples[i].yp});
  }
  if (c.status == numerics::OdeStatus::reached_end) {
    curve.asymptotic_height = extrapolate_height(metric, curve.radial);
  } else {
    curve.termination.detail += "; continuation stopped: " +
                                std::string(numerics::to_string(c.status)) + " at x = " +
                                std::to_string(c.samples.back().t);
  }
  return curve;
}

PsiReport psi_diagnostic(const ConformalMetric& metric, const ProfileCurve& curve) {
  PsiReport out;
  out.min_psi = nan;
  out.min_dpsi = nan;
  if (curve.samples.empty()) return out;
  const double t_start = curve.samples.front().t;
  for (const auto& s : curve.samples) {
    const double psi = s.t * s.xp - s.x;
    const double dpsi = s.t * rhs(metric, s.t, s.x, s.xp);
    out.series.push_back({s.t, psi, dpsi});
    if (s.t > t_start) {
      out.min_psi = std::isnan(out.min_psi) ? psi : std::min(out.min_psi, psi);
      out.min_dpsi = std::isnan(out.min_dpsi) ? dpsi : std::min(out.min_dpsi, dpsi);
    }
  }
  return out;
}

std::vector<Sigma0Row> convergence_to_sigma0(const ConformalMetric& metric,
                                             const std::vector<double>& t0_list,
                                             const ProfileSettings& settings) {
  if (metric.n() < 4) throw DomainError("convergence to the totally geodesic slab needs n >= 4");
  if (t0_list.empty()) throw DomainError("t0 list is empty");
  for (std::size_t i = 0; i < t0_list.size(); ++i) {
    if (!(t0_list[i] > 0.0)) throw DomainError("t0 values must be positive");
    if (i > 0 && !(t0_list[i] < t0_list[i - 1])) {
      throw DomainError("t0 list must be strictly decreasing");
    }
  }
  std::vector<Sigma0Row> rows;
  for (double t0 : t0_list) {
    const ProfileCurve c = solve_profile(metric, t0, settings);
    rows.push_back({t0, c.max_height, c.termination.kind});
  }
  return rows;
}

std::vector<ProfileSample> mirrored(const std::vector<ProfileSample>& samples) {
  std::vector<ProfileSample> out;
  out.reserve(2 * samples.size());
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    if (it->t == 0.0) continue;
    out.push_back({-it->t, it->x, -it->xp});
  }
  out.insert(out.end(), samples.begin(), samples.end());
  return out;
}

}  // namespace fbmin::profile
