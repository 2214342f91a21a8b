#pragma once

// Generating curves of rotationally symmetric hypersurfaces that are minimal
// for a radial conformal metric and meet the boundary sphere orthogonally.
//
// The curve is first integrated as a graph x(t). Once the slope x' passes a
// threshold it is continued as a graph t(x) over the radial axis, which stays
// regular through a horizontal tangent (dt/dx = 0).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbmin/metrics.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::profile {

using metrics::ConformalMetric;

/// x'' for the graph x(t); throws DomainError for x <= 0.
double rhs(const ConformalMetric& metric, double t, double x, double xp);

/// Same ODE for classical Schwarzschild (k = 1) written with
/// chi = 2m(n-1) / (2 s^{n/2} + m s), s = x^2 + t^2.
double rhs_chi_form(int n, double m, double t, double x, double xp);
double chi(int n, double m, double x, double t);

/// t'' for the graph t(x), tp = dt/dx.
double radial_rhs(const ConformalMetric& metric, double x, double t, double tp);

struct InitialData {
  double t0;
  double x0;
  double xp0;
};

/// Free-boundary data on the sphere of radius R0 = metric.boundary_radius().
/// t0 must lie in [1e-6 R0, (1 - 1e-6) R0].
InitialData initial_conditions(const ConformalMetric& metric, double t0);

struct ProfileSample {
  double t;
  double x;
  double xp;
};

/// Point of the curve in the radial parametrization.
struct RadialSample {
  double x;
  double t;
  double tp;
};

enum class TerminationKind {
  reached_tmax,
  reached_xmax,
  blowup,
  step_failure,
};

std::string_view to_string(TerminationKind kind);

struct Termination {
  TerminationKind kind = TerminationKind::step_failure;
  /// t_max, the height at x_max, the blow-up height t_star, or the failure location.
  double t = 0.0;
  /// Radius at termination; +inf for a blow-up approached only as x -> inf.
  double x = 0.0;
  /// Blow-up of x' at finite radius (a horizontal tangent of the curve).
  bool slope_singularity = false;
  std::string detail;
};

struct ProfileSettings {
  double t_max = 1e3;
  double x_max = 1e6;
  double slope_threshold = 1e3;
  /// Follow the curve past a horizontal tangent (where it stops being a graph over t).
  bool continue_past_turning = true;
  numerics::OdeSettings ode{};
};

struct ProfileCurve {
  InitialData initial{};
  /// Graph part: t strictly increasing, x' finite and positive.
  std::vector<ProfileSample> samples;
  Termination termination;
  /// Height where integration switched to t(x).
  std::optional<double> parametrization_switch;
  /// Radial part from the switch on, x strictly increasing. Includes the
  /// turning point and the continuation beyond it when present.
  std::vector<RadialSample> radial;
  /// Horizontal tangent (dt/dx = 0) ending the graph part.
  std::optional<RadialSample> turning;
  /// Extrapolated lim t as x -> inf along the radial part (n >= 4).
  std::optional<double> asymptotic_height;
  /// Largest height reached anywhere along the curve.
  double max_height = 0.0;
};

ProfileCurve solve_profile(const ConformalMetric& metric, double t0,
                           const ProfileSettings& settings = {});

/// Same integration from arbitrary data (t_start, x, x'), bypassing the
/// boundary conditions. Used for oracle curves such as the catenoid.
ProfileCurve solve_profile_from(const ConformalMetric& metric, double t_start, double x,
                                double xp, const ProfileSettings& settings = {});

struct PsiPoint {
  double t;
  double psi;
  double dpsi;
};

struct PsiReport {
  std::vector<PsiPoint> series;
  /// Minima over samples with t > t_start (NaN when there are none).
  double min_psi;
  double min_dpsi;
};

/// Psi = t x' - x and Psi' = t x'' along the graph part.
PsiReport psi_diagnostic(const ConformalMetric& metric, const ProfileCurve& curve);

struct Sigma0Row {
  double t0;
  double height;
  TerminationKind termination;
};

/// Total heights of the curves for a decreasing list of t0 (n >= 4).
std::vector<Sigma0Row> convergence_to_sigma0(const ConformalMetric& metric,
                                             const std::vector<double>& t0_list,
                                             const ProfileSettings& settings = {});

/// Reflection t -> -t of the graph part prepended to it, t increasing.
/// A sample at t = 0 is not duplicated.
std::vector<ProfileSample> mirrored(const std::vector<ProfileSample>& samples);

}  // namespace fbmin::profile
