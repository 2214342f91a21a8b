#include "fbmin/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fbmin/errors.hpp"

namespace fbmin::metrics {

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::schwarzschild: return "schwarzschild";
    case MetricKind::cylinder: return "cylinder";
    case MetricKind::beta: return "beta";
    case MetricKind::custom: return "custom";
  }
  return "custom";
}

MetricKind metric_kind_from_string(std::string_view name) {
  if (name == "schwarzschild") return MetricKind::schwarzschild;
  if (name == "cylinder") return MetricKind::cylinder;
  if (name == "beta") return MetricKind::beta;
  if (name == "custom" || name == "flat") return MetricKind::custom;
  throw DomainError("unknown metric kind '" + std::string(name) +
                    "' (expected schwarzschild, cylinder, beta or flat)");
}

SchwarzschildParams make_schwarzschild_params(int n, double k, double m) {
  if (n < 3) throw DomainError("dimension n must be at least 3");
  if (!(k >= 1.0) || !std::isfinite(k)) throw DomainError("exponent k must satisfy k >= 1");
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("mass m must be positive");
  if (std::abs(n - 2.0 * k) < 1e-12) throw DomainError("n = 2k is not allowed");
  return {n, k, m, std::pow(m / 2.0, k / (n - 2.0 * k))};
}

double horizon_radius(int n, double k, double m) { return make_schwarzschild_params(n, k, m).R0; }

ConformalMetric::ConformalMetric(int n, RadialFunction u, RadialFunction u_prime,
                                 RadialFunction u2, std::optional<DecayCertificate> decay,
                                 double r0)
    : n_(n), u_(std::move(u)), up_(std::move(u_prime)), u2_(std::move(u2)), decay_(decay),
      r0_(r0) {
  if (n_ < 3) throw DomainError("dimension n must be at least 3");
  if (!u_ || !up_) throw DomainError("metric needs both u and u'");
  if (decay_ && (!(decay_->c > 0.0) || !(decay_->alpha >= 2.0))) {
    throw DomainError("decay certificate needs c > 0 and alpha >= 2");
  }
  if (!(r0_ >= 0.0)) throw DomainError("boundary radius must be nonnegative");
}

double ConformalMetric::u_second(double s) const {
  if (u2_) return u2_(s);
  const double h = 1e-5 * std::max(s, 1e-8);
  return (up_(s + h) - up_(s - h)) / (2.0 * h);
}

ConformalMetric schwarzschild_metric(int n, double k, double m) {
  const SchwarzschildParams p = make_schwarzschild_params(n, k, m);
  const double q = n / (2.0 * k);
  const double lead = 2.0 * k / (n - 2.0 * k);
  ConformalMetric g(
      n, [=](double s) { return lead * std::log1p(0.5 * m * std::pow(s, 1.0 - q)); },
      [=](double s) { return -m / (2.0 * std::pow(s, q) + m * s); },
      [=](double s) {
        const double d = 2.0 * std::pow(s, q) + m * s;
        return m * (2.0 * q * std::pow(s, q - 1.0) + m) / (d * d);
      },
      DecayCertificate{1.0, 2.0}, p.R0);
  g.kind_ = MetricKind::schwarzschild;
  g.sch_ = p;
  return g;
}

ConformalMetric cylinder_metric(double r0) {
  if (!(r0 > 0.0)) throw DomainError("boundary radius r0 must be positive");
  ConformalMetric g(
      3, [](double s) { return -0.5 * std::log(s); }, [](double s) { return -0.5 / s; },
      [](double s) { return 0.5 / (s * s); }, DecayCertificate{0.5, 2.0}, r0);
  g.kind_ = MetricKind::cylinder;
  return g;
}

ConformalMetric beta_metric(double beta, int n, double r0) {
  if (!(beta > 0.0 && beta <= 0.5)) throw DomainError("beta must lie in (0, 1/2]");
  if (!(r0 > 0.0)) throw DomainError("boundary radius r0 must be positive");
  ConformalMetric g(
      n, [=](double s) { return -beta * std::log1p(s); },
      [=](double s) { return -beta / (1.0 + s); },
      [=](double s) { return beta / ((1.0 + s) * (1.0 + s)); }, DecayCertificate{beta, 2.0},
      r0);
  g.kind_ = MetricKind::beta;
  g.beta_ = beta;
  return g;
}

ConformalMetric flat_metric(int n) {
  auto zero = [](double) { return 0.0; };
  ConformalMetric g(n, zero, zero, zero, std::nullopt, 0.0);
  g.flat_ = true;
  return g;
}

HypothesisReport validate_hypotheses(const ConformalMetric& metric, double r_min, double r_max,
                                     int samples) {
  if (!(r_min > 0.0)) throw DomainError("validate_hypotheses needs r_min > 0");
  if (!(r_max >= r_min)) throw DomainError("validate_hypotheses needs r_max >= r_min");
  if (samples < 2) throw DomainError("validate_hypotheses needs at least 2 samples");
  HypothesisReport report;
  report.samples = samples;
  if (!metric.decay()) report.worst_decay_ratio = std::numeric_limits<double>::quiet_NaN();
  const double la = std::log(r_min), lb = std::log(r_max);
  for (int i = 0; i < samples; ++i) {
    const double r = std::exp(la + (lb - la) * i / (samples - 1));
    const double s = r * r;
    const double up = metric.u_prime(s);
    if (!(up < 0.0)) {
      report.ok = false;
      report.violations.push_back({r, up, "u' >= 0"});
      continue;
    }
    if (const auto& d = metric.decay()) {
      const double ratio = -up * std::pow(s, 0.5 * d->alpha) / d->c;
      report.worst_decay_ratio = std::max(report.worst_decay_ratio, ratio);
      if (ratio > 1.0 + 1e-12) {
        report.ok = false;
        report.violations.push_back({r, up, "-u' exceeds c / r^alpha"});
      }
    }
  }
  return report;
}

}  // namespace fbmin::metrics
