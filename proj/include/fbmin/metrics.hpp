#pragma once

// Radial conformal metrics g = e^{2h} <,> on (part of) R^n with h(x) = u(|x|^2).
// Everything downstream is written in terms of s = |x|^2.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fbmin::metrics {

enum class MetricKind { schwarzschild, cylinder, beta, custom };

std::string_view to_string(MetricKind kind);
MetricKind metric_kind_from_string(std::string_view name);

/// Certificate -u'(s) <= c s^{-alpha/2}.
struct DecayCertificate {
  double c;
  double alpha;
};

struct SchwarzschildParams {
  int n;
  double k;
  double m;
  double R0;
};

/// Throws DomainError unless n >= 3, k >= 1, n != 2k and m > 0.
SchwarzschildParams make_schwarzschild_params(int n, double k, double m);

double horizon_radius(int n, double k, double m);

using RadialFunction = std::function<double(double)>;

class ConformalMetric {
 public:
  /// Custom metric. u2 may be empty, in which case u'' is taken by central
  /// differences of u'. r0 is the radius of the inner boundary (0 if none).
  ConformalMetric(int n, RadialFunction u, RadialFunction u_prime, RadialFunction u2 = {},
                  std::optional<DecayCertificate> decay = std::nullopt, double r0 = 0.0);

  int n() const { return n_; }
  MetricKind kind() const { return kind_; }
  double u(double s) const { return u_(s); }
  double u_prime(double s) const { return up_(s); }
  double u_second(double s) const;
  const std::optional<DecayCertificate>& decay() const { return decay_; }
  /// Radius of the boundary sphere (the horizon R0 for Schwarzschild).
  double boundary_radius() const { return r0_; }

  /// Set for Schwarzschild metrics.
  const std::optional<SchwarzschildParams>& schwarzschild() const { return sch_; }
  /// Set for beta metrics.
  std::optional<double> beta() const { return beta_; }

  /// True when u' vanishes identically (used to skip switch checks in tests).
  bool is_flat() const { return flat_; }

 private:
  friend ConformalMetric schwarzschild_metric(int, double, double);
  friend ConformalMetric cylinder_metric(double);
  friend ConformalMetric beta_metric(double, int, double);
  friend ConformalMetric flat_metric(int);

  int n_;
  MetricKind kind_ = MetricKind::custom;
  RadialFunction u_;
  RadialFunction up_;
  RadialFunction u2_;
  std::optional<DecayCertificate> decay_;
  double r0_ = 0.0;
  std::optional<SchwarzschildParams> sch_;
  std::optional<double> beta_;
  bool flat_ = false;
};

/// u(s) = 2k/(n-2k) ln(1 + (m/2) s^{1-n/(2k)}), u'(s) = -m/(2 s^{n/(2k)} + m s),
/// decay certificate (1, 2).
ConformalMetric schwarzschild_metric(int n, double k, double m);

/// R^3 minus the origin, isometric to S^2 x R: u(s) = -ln(s)/2. Every sphere
/// about the origin is totally geodesic; r0 selects the boundary sphere.
ConformalMetric cylinder_metric(double r0 = 1.0);

/// Complete metric u(s) = -beta ln(1 + s) on R^n, beta in (0, 1/2], with
/// boundary sphere of radius r0.
ConformalMetric beta_metric(double beta, int n = 3, double r0 = 1.0);

/// u identically zero; the catenoid test bed.
ConformalMetric flat_metric(int n);

struct HypothesisViolation {
  double r;
  double u_prime;
  std::string what;
};

struct HypothesisReport {
  bool ok = true;
  int samples = 0;
  /// Largest observed -u'(s) s^{alpha/2} / c (NaN without certificate).
  double worst_decay_ratio = 0.0;
  std::vector<HypothesisViolation> violations;
};

/// Samples s = r^2 log-uniformly on [r_min^2, r_max^2] and checks u' < 0
/// and, when a certificate is present, the decay bound.
HypothesisReport validate_hypotheses(const ConformalMetric& metric, double r_min, double r_max,
                                     int samples = 400);

}  // namespace fbmin::metrics
