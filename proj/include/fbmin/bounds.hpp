#pragma once

// Comparison machinery for the profile ODE: the explicit height bound for
// n >= 4, the lower envelope curve it comes from, and the autonomous
// tangent comparison used for n = 3.

#include <vector>

namespace fbmin::bounds {

struct HeightBound {
  /// +inf when divergent.
  double h0;
  double quad_error;
  bool divergent;
  int n;
  double R0;
  double t0;
};

/// Integrand of the envelope, dt/dmu = [(R0/t0)^2 (mu/x0)^{2(n-2)} - 1]^{-1/2}
/// with x0 = sqrt(R0^2 - t0^2). Finite (= t0/x0) at mu = x0.
double envelope_slope(int n, double R0, double t0, double mu);

/// h0 = t0 + integral of envelope_slope over [x0, inf). Divergent for n = 3.
HeightBound height_bound(int n, double R0, double t0);

/// Height of the envelope over radius u >= x0; equals t0 at u = x0.
double lower_envelope(int n, double R0, double t0, double u);

/// Radius u with lower_envelope(u) = t, for t0 <= t < h0.
double envelope_inverse(int n, double R0, double t0, double t);

enum class TanVariant {
  schwarzschild,  // parameter is the mass m
  general,        // parameter is the decay exponent alpha
};

/// Constant a of the autonomous bound x'' <= (x' a / x^4 + 1/x)(1 + x'^2), n = 3.
double autonomous_constant(TanVariant variant, double m_or_alpha, double t0, int n = 3);

struct TanBoundParams {
  double a;
  double c1;
  bool shifted;
};

/// c1 = -atan(1/t0) - a / sqrt(R0^2 - t0^2). When c1 lies within 1e-6 of
/// pi/2 + k pi, a is raised by 1% (at most 5 times) and shifted is set.
TanBoundParams c1_constant(double a, double R0, double t0);

/// -tan(a e^{-v} + c1); throws DomainError within 1e-9 of a pole.
double tan_bound_slope(double a, double c1, double v_tilde);

/// Distance from c to the nearest pi/2 + k pi.
double pole_distance(double c);

struct ComparisonSample {
  double t;
  double v;
  double vp;
  /// -tan(a e^{-v} + c1) at the same point.
  double vp_closed;
};

/// Integrates v'' = a (v' + v'^3) e^{-v} from v(t0) = ln x0, v'(t0) = 1/t0
/// up to t_end or until v' leaves [0, vp_cap].
std::vector<ComparisonSample> comparison_trajectory(const TanBoundParams& p, double R0,
                                                    double t0, double t_end,
                                                    double vp_cap = 1e8);

}  // namespace fbmin::bounds
