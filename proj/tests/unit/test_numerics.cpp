#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "fbmin/errors.hpp"
#include "fbmin/numerics.hpp"
#include "generators.hpp"

using namespace fbmin;
using namespace fbmin::numerics;

TEST_CASE("harmonic oscillator follows cos t") {
  const auto rhs = [](double, double y, double) { return -y; };
  OdeSettings s;
  const auto traj = integrate_ode(rhs, 0.0, {1.0, 0.0}, 10.0, s);
  CHECK(traj.status == OdeStatus::reached_end);
  CHECK(traj.samples.back().t == doctest::Approx(10.0).epsilon(1e-15));
  for (const auto& p : traj.samples) {
    CHECK(std::abs(p.y - std::cos(p.t)) < 1e-8);
    CHECK(std::abs(p.yp + std::sin(p.t)) < 1e-8);
  }
}

TEST_CASE("event lands on the root of y'") {
  const auto rhs = [](double, double y, double) { return -y; };
  const EventFunction ev = [](const OdeSample& p) { return p.yp; };
  // y' = -sin t first vanishes (after the start) at pi; start just past 0.
  const auto traj = integrate_ode(rhs, 0.5, {std::cos(0.5), -std::sin(0.5)}, 10.0, {}, {}, ev);
  CHECK(traj.status == OdeStatus::event);
  CHECK(traj.samples.back().t == doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("stop predicate and non-finite right-hand side") {
  const auto grow = [](double, double y, double) { return y; };
  const StopPredicate stop = [](const OdeSample& p) { return p.y > 100.0; };
  const auto a = integrate_ode(grow, 0.0, {1.0, 1.0}, 50.0, {}, stop);
  CHECK(a.status == OdeStatus::stopped);
  CHECK(a.samples.back().y > 100.0);

  // y'' = y'^2 with y'(0) = 1 blows up at t = 1.
  const auto blow = [](double, double, double yp) { return yp * yp; };
  const auto b = integrate_ode(blow, 0.0, {0.0, 1.0}, 2.0, {});
  CHECK(b.status != OdeStatus::reached_end);
  CHECK(b.samples.back().t < 1.0 + 1e-6);
}

TEST_CASE("ODE settings are validated") {
  OdeSettings s;
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = {};
  s.max_steps = 0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("adaptive quadrature on smooth and endpoint-singular integrands") {
  CHECK(quad_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(quad_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(quad_adaptive([](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -1.0, 1.0).value ==
        doctest::Approx(std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("improper quadrature: convergent tails and divergence") {
  const auto p2 = quad_improper([](double x) { return 1.0 / (x * x); }, 1.0, INFINITY);
  CHECK_FALSE(p2.divergent);
  CHECK(p2.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p2.tail_power == doctest::Approx(2.0).epsilon(1e-6));

  const auto slow = quad_improper([](double x) { return std::pow(x, -1.5); }, 1.0, INFINITY);
  CHECK(slow.value == doctest::Approx(2.0).epsilon(1e-7));

  const auto lorentz = quad_improper([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, INFINITY);
  CHECK(lorentz.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-9));

  const auto harmonic = quad_improper([](double x) { return 1.0 / x; }, 1.0, INFINITY);
  CHECK(harmonic.divergent);
  CHECK(std::isinf(harmonic.value));
}

TEST_CASE("bracketed root finding") {
  CHECK(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), DomainError);
}

TEST_CASE("quintic Hermite reproduces quintics") {
  gen::Source src(7);
  for (int trial = 0; trial < 20; ++trial) {
    double c[6];
    for (double& v : c) v = src.uniform(-2.0, 2.0);
    const auto p = [&](double t) {
      return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
    };
    const auto dp = [&](double t) {
      return c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])));
    };
    const auto d2p = [&](double t) { return 2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5])); };
    const double a = src.uniform(-1.0, 0.0), b = src.uniform(0.5, 2.0), t = src.uniform(a, b);
    const auto v = hermite_quintic(a, b, {p(a), dp(a), d2p(a)}, {p(b), dp(b), d2p(b)}, t);
    CHECK(v.y == doctest::Approx(p(t)).epsilon(1e-11));
    CHECK(v.yp == doctest::Approx(dp(t)).epsilon(1e-9));
    CHECK(v.ypp == doctest::Approx(d2p(t)).epsilon(1e-8));
  }
}

namespace {

SturmLiouvilleProblem laplacian(BoundaryCondition left, BoundaryCondition right, double shift = 0.0) {
  SturmLiouvilleProblem p;
  p.potential = [shift](double) { return shift; };
  p.weight = [](double) { return 1.0; };
  p.a = 0.0;
  p.b = std::numbers::pi;
  p.left = left;
  p.right = right;
  return p;
}

// Dense generalized eigenvalues of the discrete pencil.
Eigen::VectorXd dense_spectrum(const DiscreteSturmLiouville& d) {
  const int n = d.unknowns();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    K(i, i) = d.diag[i];
    M(i, i) = d.mass[i];
    if (i + 1 < n) K(i, i + 1) = K(i + 1, i) = d.off[i];
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("Dirichlet Laplacian on [0, pi] has eigenvalues j^2") {
  const auto d = discretize(laplacian(BoundaryCondition::dirichlet(), BoundaryCondition::dirichlet()), 4000);
  CHECK(count_below(d, 0.0) == 0);
  CHECK(count_below(d, 3.9) == 1);
  CHECK(count_below(d, 4.1) == 2);
  CHECK(count_below(d, 10.5) == 3);
  CHECK(smallest_eigenvalue(d) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("Neumann and Robin ends") {
  const auto n = discretize(laplacian(BoundaryCondition::neumann(), BoundaryCondition::neumann()), 4000);
  CHECK(count_below(n, -1e-9) == 0);
  CHECK(count_below(n, 0.5) == 1);
  CHECK(count_below(n, 1.5) == 2);
  // v' = v at 0 with Dirichlet at pi: lowest mode sits below the Dirichlet one.
  const auto r = discretize(laplacian(BoundaryCondition::robin(1.0), BoundaryCondition::dirichlet()), 4000);
  const auto dd = discretize(laplacian(BoundaryCondition::dirichlet(), BoundaryCondition::dirichlet()), 4000);
  CHECK(smallest_eigenvalue(r) < smallest_eigenvalue(dd));
  // Oracle: v = sin(w (pi - x)); v'(0) = v(0) means -w cos(w pi) = sin(w pi).
  const double w = find_root([](double w) { return std::tan(w * std::numbers::pi) + w; }, 0.51, 0.99);
  CHECK(smallest_eigenvalue(r) == doctest::Approx(w * w).epsilon(1e-5));
}

TEST_CASE("negative count with a constant potential") {
  // -v'' - 5 v: eigenvalues j^2 - 5, two negative.
  const auto c = sl_negative_count(laplacian(BoundaryCondition::dirichlet(), BoundaryCondition::dirichlet(), -5.0));
  CHECK(c.converged);
  CHECK(c.negative_count == 2);
  CHECK(c.smallest_eigenvalue == doctest::Approx(-4.0).epsilon(1e-5));
}

TEST_CASE("Sturm counts agree with a dense eigensolver") {
  gen::Source src(11);
  for (int trial = 0; trial < 6; ++trial) {
    SturmLiouvilleProblem p;
    const double c1 = src.uniform(-20.0, 5.0), c2 = src.uniform(0.5, 3.0);
    p.stiffness = [c2](double x) { return 1.0 + c2 * x; };
    p.potential = [c1](double x) { return c1 * std::exp(-x); };
    p.weight = [](double x) { return 1.0 + 0.5 * std::sin(x); };
    p.a = 0.5;
    p.b = 4.0 + trial;
    p.left = trial % 2 ? BoundaryCondition::robin(src.uniform(-1.0, 1.0)) : BoundaryCondition::dirichlet();
    p.spacing = trial % 3 ? GridSpacing::logarithmic : GridSpacing::uniform;
    const auto d = discretize(p, 300);
    const Eigen::VectorXd ev = dense_spectrum(d);
    for (int q = 0; q < 5; ++q) {
      const double lambda = src.uniform(ev(0) - 1.0, ev(std::min<int>(10, ev.size() - 1)));
      int dense = 0;
      for (int i = 0; i < ev.size(); ++i) dense += ev(i) < lambda ? 1 : 0;
      CHECK(count_below(d, lambda) == dense);
    }
    CHECK(smallest_eigenvalue(d) == doctest::Approx(ev(0)).epsilon(1e-9));
  }
}

TEST_CASE("ground state satisfies the discrete energy identity") {
  auto p = laplacian(BoundaryCondition::robin(0.7), BoundaryCondition::dirichlet(), -3.0);
  p.stiffness = [](double x) { return 1.0 + x; };
  const auto d = discretize(p, 2000);
  const double lambda = smallest_eigenvalue(d);
  const auto v = ground_state(d, lambda);
  const auto f = discrete_forms(d, v);
  CHECK(v.back() == 0.0);
  CHECK(f.norm == doctest::Approx(1.0).epsilon(1e-12));
  for (double x : v) CHECK(x >= 0.0);
  CHECK(f.gradient + f.boundary + f.potential == doctest::Approx(lambda * f.norm).epsilon(1e-9));
}
