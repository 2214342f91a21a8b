#include "fbmin/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fbmin/errors.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::bounds {

namespace {

void check_params(int n, double R0, double t0) {
  if (n < 3) throw DomainError("dimension n must be at least 3");
  if (!(R0 > 0.0)) throw DomainError("R0 must be positive");
  if (!(t0 > 0.0 && t0 < R0)) {
    throw DomainError("t0 must lie in (0, R0) with R0 = " + std::to_string(R0));
  }
}

double radius0(double R0, double t0) { return std::sqrt((R0 - t0) * (R0 + t0)); }

numerics::QuadSettings envelope_quad() {
  numerics::QuadSettings s;
  s.rel_tol = 1e-12;
  s.abs_tol = 1e-13;
  return s;
}

}  // namespace

double envelope_slope(int n, double R0, double t0, double mu) {
  check_params(n, R0, t0);
  const double x0 = radius0(R0, t0);
  if (!(mu >= x0)) throw DomainError("envelope is defined for mu >= sqrt(R0^2 - t0^2)");
  // ln q with q = (R0/t0)^2 (mu/x0)^{2(n-2)} > 1; 1/sqrt(q - 1) without overflow.
  const double lq = 2.0 * std::log(R0 / t0) + 2.0 * (n - 2) * std::log(mu / x0);
  return std::exp(-0.5 * lq) / std::sqrt(-std::expm1(-lq));
}

HeightBound height_bound(int n, double R0, double t0) {
  check_params(n, R0, t0);
  const double x0 = radius0(R0, t0);
  const auto f = [&](double mu) { return envelope_slope(n, R0, t0, mu); };
  const numerics::QuadResult q =
      numerics::quad_improper(f, x0, std::numeric_limits<double>::infinity(), envelope_quad());
  HeightBound out{t0 + q.value, q.error_estimate, q.divergent, n, R0, t0};
  if (q.divergent) out.h0 = std::numeric_limits<double>::infinity();
  return out;
}

double lower_envelope(int n, double R0, double t0, double u) {
  check_params(n, R0, t0);
  const double x0 = radius0(R0, t0);
  if (!(u >= x0)) throw DomainError("envelope is defined for u >= sqrt(R0^2 - t0^2)");
  const auto f = [&](double mu) { return envelope_slope(n, R0, t0, mu); };
  double t = t0;
  for (double lo = x0; lo < u; lo *= 10.0) {
    t += numerics::quad_adaptive(f, lo, std::min(u, 10.0 * lo), envelope_quad()).value;
  }
  return t;
}

double envelope_inverse(int n, double R0, double t0, double t) {
  check_params(n, R0, t0);
  if (!(t >= t0)) throw DomainError("envelope inverse needs t >= t0");
  const double x0 = radius0(R0, t0);
  if (t == t0) return x0;
  const auto g = [&](double u) { return lower_envelope(n, R0, t0, u) - t; };
  double hi = 2.0 * x0;
  for (int i = 0; g(hi) < 0.0; ++i) {
    if (i > 60) throw DomainError("envelope does not reach height " + std::to_string(t));
    hi *= 4.0;
  }
  return numerics::find_root(g, x0, hi);
}

double autonomous_constant(TanVariant variant, double m_or_alpha, double t0, int n) {
  if (n != 3) throw DomainError("the autonomous tangent bound is stated for n = 3 only");
  if (!(t0 > 0.0)) throw DomainError("t0 must be positive");
  if (variant == TanVariant::schwarzschild) {
    const double m = m_or_alpha;
    if (!(m > 0.0)) throw DomainError("mass m must be positive");
    return std::max(2.0 * m / 3.0, 2.0 * m / (3.0 * t0 * t0));
  }
  const double alpha = m_or_alpha;
  if (!(alpha >= 2.0)) throw DomainError("decay exponent alpha must be at least 2");
  return std::max(4.0 / std::pow(t0, 2.0 * alpha - 3.0), 4.0);
}

double pole_distance(double c) {
  return std::abs(std::remainder(c - 0.5 * std::numbers::pi, std::numbers::pi));
}

TanBoundParams c1_constant(double a, double R0, double t0) {
  if (!(a > 0.0)) throw DomainError("a must be positive");
  if (!(R0 > 0.0 && t0 > 0.0 && t0 < R0)) throw DomainError("t0 must lie in (0, R0)");
  const double x0 = radius0(R0, t0);
  TanBoundParams p{a, -std::atan(1.0 / t0) - a / x0, false};
  for (int i = 0; i < 5 && pole_distance(p.c1) <= 1e-6; ++i) {
    p.a *= 1.01;
    p.c1 = -std::atan(1.0 / t0) - p.a / x0;
    p.shifted = true;
  }
  return p;
}

double tan_bound_slope(double a, double c1, double v_tilde) {
  const double arg = a * std::exp(-v_tilde) + c1;
  if (pole_distance(arg) <= 1e-9) {
    throw DomainError("tan bound evaluated within 1e-9 of a pole");
  }
  return -std::tan(arg);
}

std::vector<ComparisonSample> comparison_trajectory(const TanBoundParams& p, double R0,
                                                    double t0, double t_end, double vp_cap) {
  if (!(R0 > 0.0 && t0 > 0.0 && t0 < R0)) throw DomainError("t0 must lie in (0, R0)");
  if (!(t_end > t0)) throw DomainError("t_end must exceed t0");
  const double a = p.a;
  const numerics::SecondOrderRhs rhs = [a](double, double v, double vp) {
    return a * (vp + vp * vp * vp) * std::exp(-v);
  };
  const numerics::StopPredicate stop = [vp_cap](const numerics::OdeSample& s) {
    return !(s.yp >= 0.0 && s.yp <= vp_cap);
  };
  numerics::OdeSettings settings;
  settings.rel_tol = 1e-11;
  settings.abs_tol = 1e-13;
  const auto traj = numerics::integrate_ode(rhs, t0, {std::log(radius0(R0, t0)), 1.0 / t0},
                                            t_end, settings, stop);
  std::vector<ComparisonSample> out;
  for (const auto& s : traj.samples) {
    double closed = std::numeric_limits<double>::quiet_NaN();
    if (pole_distance(a * std::exp(-s.y) + p.c1) > 1e-9) closed = tan_bound_slope(a, p.c1, s.y);
    out.push_back({s.t, s.y, s.yp, closed});
  }
  return out;
}

}  // namespace fbmin::bounds
