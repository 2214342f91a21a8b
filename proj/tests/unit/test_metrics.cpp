#include <doctest.h>

#include <cmath>

#include "fbmin/errors.hpp"
#include "fbmin/metrics.hpp"
#include "generators.hpp"

using namespace fbmin;
using namespace fbmin::metrics;

TEST_CASE("Schwarzschild u' and u'' match finite differences") {
  gen::Source src(101);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = gen::schwarzschild(src);
    const auto g = schwarzschild_metric(p.n, p.k, p.m);
    const double s = p.R0 * p.R0 * src.log_uniform(1.0, 1e4);
    const double h = 1e-5 * s;
    const double fd1 = (g.u(s + h) - g.u(s - h)) / (2 * h);
    const double fd2 = (g.u_prime(s + h) - g.u_prime(s - h)) / (2 * h);
    CHECK(g.u_prime(s) == doctest::Approx(fd1).epsilon(1e-7));
    CHECK(g.u_second(s) == doctest::Approx(fd2).epsilon(1e-7));
    CHECK(g.u_prime(s) < 0.0);
  }
}

TEST_CASE("the horizon sphere is totally geodesic") {
  // d/dr (r e^{u(r^2)}) = e^u (1 + 2 s u'(s)) vanishes at s = R0^2.
  gen::Source src(102);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = gen::schwarzschild(src);
    const auto g = schwarzschild_metric(p.n, p.k, p.m);
    const double s = p.R0 * p.R0;
    CHECK(std::abs(1.0 + 2.0 * s * g.u_prime(s)) < 1e-12);
    CHECK(g.boundary_radius() == doctest::Approx(p.R0).epsilon(1e-15));
  }
}

TEST_CASE("every sphere is totally geodesic in the cylinder metric") {
  const auto g = cylinder_metric(2.0);
  for (double s : {0.01, 1.0, 4.0, 1e6}) CHECK(1.0 + 2.0 * s * g.u_prime(s) == doctest::Approx(0.0));
  CHECK(g.boundary_radius() == 2.0);
}

TEST_CASE("horizon radius formula") {
  CHECK(horizon_radius(3, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK(horizon_radius(3, 1.0, 4.0) == doctest::Approx(2.0));
  CHECK(horizon_radius(4, 1.0, 8.0) == doctest::Approx(2.0));
  CHECK(horizon_radius(5, 1.0, 2.0 * std::pow(3.0, 3)) == doctest::Approx(3.0));
}

TEST_CASE("k = 1 reduces to the classical conformal factor") {
  // (1 + m/(2 r^{n-2}))^{4/(n-2)} = e^{2u}.
  for (int n : {3, 4, 6}) {
    const auto g = schwarzschild_metric(n, 1.0, 1.5);
    for (double r : {1.0, 2.5, 40.0}) {
      const double expected = std::pow(1.0 + 1.5 / (2.0 * std::pow(r, n - 2)), 4.0 / (n - 2));
      CHECK(std::exp(2.0 * g.u(r * r)) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(schwarzschild_metric(4, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(schwarzschild_metric(3, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(schwarzschild_metric(3, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(schwarzschild_metric(2, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(beta_metric(0.7), DomainError);
  CHECK_THROWS_AS(metric_kind_from_string("anti-de-sitter"), DomainError);
}

TEST_CASE("metric kind names round-trip") {
  for (auto k : {MetricKind::schwarzschild, MetricKind::cylinder, MetricKind::beta, MetricKind::custom}) {
    CHECK(metric_kind_from_string(to_string(k)) == k);
  }
}

TEST_CASE("hypothesis validation") {
  const auto ok = validate_hypotheses(schwarzschild_metric(3, 1.1, 2.0), 1.0, 1e4);
  CHECK(ok.ok);
  CHECK(ok.worst_decay_ratio <= 1.0 + 1e-12);
  CHECK(validate_hypotheses(beta_metric(0.4), 1.0, 1e3).ok);

  // u' > 0 violates the monotonicity hypothesis.
  const ConformalMetric bad(3, [](double s) { return 0.1 * std::log(s); }, [](double s) { return 0.1 / s; });
  const auto rep = validate_hypotheses(bad, 1.0, 10.0, 50);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.violations.empty());

  // A certificate that is too small is caught.
  const ConformalMetric tight(3, [](double s) { return -std::log(1 + s); },
                              [](double s) { return -1.0 / (1 + s); }, {}, DecayCertificate{0.1, 2.0});
  CHECK_FALSE(validate_hypotheses(tight, 1.0, 10.0).ok);
}

TEST_CASE("flat metric") {
  const auto g = flat_metric(3);
  CHECK(g.is_flat());
  CHECK(g.u(5.0) == 0.0);
  CHECK(g.u_prime(5.0) == 0.0);
  CHECK(g.boundary_radius() == 0.0);
}
