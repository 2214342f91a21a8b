#include <doctest.h>

#include <cmath>

#include "fbmin/errors.hpp"
#include "fbmin/geometry.hpp"
#include "fbmin/profile.hpp"
#include "generators.hpp"

using namespace fbmin;
using namespace fbmin::profile;

TEST_CASE("graph and chi forms of the ODE agree for k = 1") {
  gen::Source src(201);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = src.integer(3, 6);
    const double m = src.uniform(0.5, 4.0);
    const auto g = metrics::schwarzschild_metric(n, 1.0, m);
    const double R0 = g.boundary_radius();
    const double t = src.uniform(0.0, 3.0 * R0), x = src.uniform(0.5 * R0, 5.0 * R0);
    const double xp = src.log_uniform(1e-2, 1e2);
    CHECK(rhs_chi_form(n, m, t, x, xp) == doctest::Approx(rhs(g, t, x, xp)).epsilon(1e-12));
  }
}

TEST_CASE("graph and radial forms describe the same curve") {
  // For t(x) inverse to x(t): t' = 1/x', t'' = -x''/x'^3.
  gen::Source src(202);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = gen::schwarzschild(src);
    const auto g = metrics::schwarzschild_metric(p.n, p.k, p.m);
    const double t = src.uniform(0.0, 2.0 * p.R0), x = src.uniform(p.R0, 4.0 * p.R0);
    const double xp = src.log_uniform(1e-2, 1e2);
    const double xpp = rhs(g, t, x, xp);
    CHECK(radial_rhs(g, x, t, 1.0 / xp) == doctest::Approx(-xpp / (xp * xp * xp)).epsilon(1e-10));
  }
}

TEST_CASE("free-boundary initial data") {
  gen::Source src(203);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = gen::schwarzschild(src);
    const auto g = metrics::schwarzschild_metric(p.n, p.k, p.m);
    const double t0 = src.uniform(0.01, 0.99) * p.R0;
    const auto d = initial_conditions(g, t0);
    // On the horizon and orthogonal to it: (x', 1) parallel to (x0, t0).
    CHECK(d.x0 * d.x0 + t0 * t0 == doctest::Approx(p.R0 * p.R0).epsilon(1e-14));
    CHECK(std::abs(t0 * d.xp0 - d.x0) <= 1e-15 * d.x0);
  }
  const auto g = metrics::schwarzschild_metric(3, 1.0, 2.0);
  CHECK_THROWS_AS(initial_conditions(g, 0.0), DomainError);
  CHECK_THROWS_AS(initial_conditions(g, 1.0), DomainError);
  CHECK_THROWS_AS(initial_conditions(g, 1.5), DomainError);
  CHECK_THROWS_AS(initial_conditions(metrics::flat_metric(3), 0.5), DomainError);
}

TEST_CASE("catenoid from the waist") {
  profile::ProfileSettings s;
  s.t_max = 4.0;
  const auto c = solve_profile_from(metrics::flat_metric(3), 0.0, 1.0, 0.0, s);
  CHECK(c.termination.kind == TerminationKind::reached_tmax);
  for (const auto& p : c.samples) {
    CHECK(std::abs(p.x - std::cosh(p.t)) < 1e-8);
    CHECK(std::abs(p.xp - std::sinh(p.t)) < 1e-7);
  }
}

TEST_CASE("solutions are minimal and stay graphs until the horizontal tangent") {
  gen::Source src(204);
  for (int trial = 0; trial < 12; ++trial) {
    const auto p = gen::schwarzschild(src);
    const auto g = metrics::schwarzschild_metric(p.n, p.k, p.m);
    const double t0 = src.uniform(0.05, 0.95) * p.R0;
    const auto c = solve_profile(g, t0);
    REQUIRE(c.samples.size() > 10);
    for (const auto& s : c.samples) {
      CHECK(s.xp > 0.0);
      if (c.parametrization_switch && s.t > *c.parametrization_switch) continue;
      const auto k = geometry::conformal_curvatures(g, geometry::from_graph(s.t, s.x, s.xp, rhs(g, s.t, s.x, s.xp)));
      CHECK(std::abs(k.Hbar) <= 1e-7 * (1.0 + std::abs(k.k1)));
    }
    const auto psi = psi_diagnostic(g, c);
    CHECK(psi.min_psi >= 0.0);
    CHECK(psi.min_dpsi >= 0.0);
    CHECK(c.max_height >= c.samples.back().t);
  }
}

TEST_CASE("the slope blows up at a horizontal tangent at finite radius") {
  const auto g = metrics::schwarzschild_metric(4, 1.0, 2.0);
  const auto c = solve_profile(g, 0.5);
  CHECK(c.termination.kind == TerminationKind::blowup);
  CHECK(c.termination.slope_singularity);
  REQUIRE(c.turning.has_value());
  CHECK(std::abs(c.turning->tp) < 1e-9);
  CHECK(std::isfinite(c.turning->x));
  CHECK(c.turning->t == doctest::Approx(c.max_height));
  // Past the turning point t decreases towards an asymptotic plane.
  REQUIRE(c.asymptotic_height.has_value());
  CHECK(*c.asymptotic_height < c.max_height);
  CHECK(c.radial.back().tp < 0.0);
  CHECK(std::abs(c.radial.back().t - *c.asymptotic_height) < 1e-3);
}

TEST_CASE("heights shrink as t0 tends to zero for n = 4") {
  const auto g = metrics::schwarzschild_metric(4, 1.0, 2.0);
  const auto rows = convergence_to_sigma0(g, {0.5, 0.1, 0.01});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].height > rows[1].height);
  CHECK(rows[1].height > rows[2].height);
  CHECK_THROWS_AS(convergence_to_sigma0(g, {0.1, 0.5}), DomainError);
  CHECK_THROWS_AS(convergence_to_sigma0(metrics::schwarzschild_metric(3, 1.0, 2.0), {0.5}), DomainError);
}

TEST_CASE("mirroring reflects t and x'") {
  std::vector<ProfileSample> s{{0.0, 1.0, 0.0}, {0.5, std::cosh(0.5), std::sinh(0.5)}, {1.0, std::cosh(1.0), std::sinh(1.0)}};
  const auto m = mirrored(s);
  REQUIRE(m.size() == 5);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& a = m[i];
    const auto& b = m[m.size() - 1 - i];
    CHECK(a.t == -b.t);
    CHECK(a.x == b.x);
    CHECK(a.xp == -b.xp);
  }
}

TEST_CASE("profile rhs rejects the axis") {
  const auto g = metrics::schwarzschild_metric(3, 1.0, 2.0);
  CHECK_THROWS_AS(rhs(g, 0.5, 0.0, 1.0), DomainError);
}
