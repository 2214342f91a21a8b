#pragma once

// Stability of the slab through the horizon and of the free-boundary
// surfaces of revolution in three-dimensional Schwarzschild spaces M^3_k.
//
// For the slab the Jacobi operator separates into Fourier modes l on the
// circle; with v = sqrt(r) a(r) each mode becomes
//   -v'' - (1/(4r^2) - l^2/r^2 + Q) v = lambda W v   on [R0, R],
//   v'(R0) = v(R0)/(2 R0),  v(R) = 0,
// with W = e^{2f} the conformal factor restricted to the slab.

#include <functional>
#include <string>
#include <vector>

#include "fbmin/geometry.hpp"
#include "fbmin/metrics.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::spectral {

/// Horizon radius (m/2)^{k/(3-2k)}; throws for k = 3/2, k < 1 or m <= 0.
double horizon_radius3(double k, double m);

/// 48(k-1) m r^{3/k} / (k (2 r^{3/k} + m r^2)^2), the scalar curvature times e^{2f}.
double scalar_curvature_factor(double k, double m, double r);

/// 4(4k-3) m r^{3/k} / (k (2 r^{3/k} + m r^2)^2).
double potential_Q(double k, double m, double r);

/// Laplacian of f on the slab plus half the scaled scalar curvature, summed term by term.
double potential_Q_two_term(double k, double m, double r);

/// (1 + m/(2 r^{3/k-2}))^{4k/(3-2k)}.
double conformal_weight(double k, double m, double r);

/// 1/(4r^2) - l^2/r^2 + Q + lambda W.
double a_lambda(double k, double m, int l, double lambda, double r);

struct BoundCheck {
  bool holds;
  /// Largest Q r^2 / (3/4) over the grid.
  double worst_ratio;
  double worst_r;
};

/// Q(r) <= 3/(4 r^2) on the grid, up to a relative 1e-12.
BoundCheck q_bound_check(double k, double m, const std::vector<double>& r_grid);

/// 4 m r^{3/k+2} / (2 r^{3/k} + m r^2)^2.
double condition_311_lhs(double k, double m, double r);

struct Condition311 {
  bool holds;
  double sup;
  double sup_r;
};

/// sup of condition_311_lhs over [R0, 1e6 R0] (log grid plus the interior
/// critical point when there is one) compared with 3/16.
Condition311 condition_311(double k, double m, int grid_points = 2000);

/// The mode problem for the slab as a Sturm-Liouville problem on a log grid.
numerics::SturmLiouvilleProblem mode_problem(double k, double m, int l, double R);

numerics::EigenCount mode_negative_count(double k, double m, int l, double R,
                                         const numerics::SturmLiouvilleSettings& settings = {});

struct ModeCount {
  int l;
  double R;
  int count;
  double smallest;
  int grid;
  bool converged;
};

struct IndexReport {
  double k = 0.0;
  double m = 0.0;
  std::vector<double> R_sequence;
  /// Sorted by (l, R).
  std::vector<ModeCount> counts;
  int l_max = 0;
  /// Sum over modes of the count at the largest R; modes l >= 1 count twice
  /// (cos and sin).
  int index = 0;
  /// Every mode has the same count at the last two radii.
  bool stabilized = false;
  /// Counts never decrease with R.
  bool monotone = true;
  /// All grid counts converged under refinement.
  bool grids_converged = true;
  bool condition_311 = false;
  /// k in (1, 6/5] or the large-mass condition holds. Not required for the computation itself.
  bool within_hypothesis = false;
  /// Relative residual of the integrated-by-parts identity for the l = 0
  /// ground mode at the largest R (NaN when that mode has no negative eigenvalue).
  double identity_residual = 0.0;
  std::string note;
};

/// l_max >= 3; jobs bounds concurrent mode solves.
IndexReport morse_index_sigma0(double k, double m, const std::vector<double>& R_list, int l_max,
                               const numerics::SturmLiouvilleSettings& settings = {},
                               int jobs = 1);

/// Riccati comparison function f(rho) = (1 - alpha (2/(1 + (2 rho/m)^alpha) - 1)) / (2 rho)
/// and its derivative.
double riccati_f(double alpha, double m, double rho);
double riccati_f_prime(double alpha, double m, double rho);

/// g(r) = a0 f(a0 r), a0 = m/(2 R0) and alpha^2 = 4 l^2 - 3. Throws for l = 0.
double riccati_floor(double k, double m, int l, double r);
double riccati_floor_prime(double k, double m, int l, double r);

/// Radial test function for the l-mode quadratic form.
struct TestFunction {
  std::function<double(double)> v;
  std::function<double(double)> dv;
};

/// [int v'^2 + v(R0)^2/(2 R0) - int (1/(4r^2) - l^2/r^2 + Q) v^2] / int W v^2 on [R0, R].
/// Integrals are split at the given breakpoints. Throws for a zero norm.
double rayleigh_quotient(double k, double m, const TestFunction& f, double R, int l = 0,
                         const std::vector<double>& breakpoints = {});

/// Piecewise-linear interpolant of a nodal vector as a test function.
TestFunction piecewise_linear(const std::vector<double>& nodes, const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Surfaces of revolution in three dimensions
// ---------------------------------------------------------------------------

/// Jacobi potential V = e^{2f} R_g / 2 + Delta f + |A|^2 - 3 H^2 / 4 in flat
/// quantities, f = u(|X|^2), n = 3.
double jacobi_potential(const metrics::ConformalMetric& metric, const geometry::CurvePoint& p);

/// Arclength-parametrized view of a piecewise curve.
class CurveInterpolant {
 public:
  explicit CurveInterpolant(std::vector<geometry::Segment> segments);
  static CurveInterpolant from_profile(const metrics::ConformalMetric& metric,
                                       const profile::ProfileCurve& curve);

  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  geometry::CurvePoint at(double s) const;
  /// First arclength where |X| reaches R; throws when it never does.
  double arclength_at_radius(double R) const;

 private:
  struct Interval {
    std::size_t segment;
    std::size_t index;
    double s0;
    double s1;
  };
  std::vector<geometry::Segment> segments_;
  std::vector<Interval> intervals_;
  std::vector<double> cumulative_;  // arclength at interval starts, then total
  std::vector<double> reach_;       // running maximum of |X| at interval ends
  geometry::CurvePoint eval(const Interval& iv, double param) const;
};

/// Mode l of the Jacobi operator on the arclength window [s_a, s_b]:
///   -(x a')' + (l^2/x - x V) a = lambda x e^{2f} a.
numerics::SturmLiouvilleProblem curve_mode_problem(const metrics::ConformalMetric& metric,
                                                   const CurveInterpolant& curve, int l,
                                                   double s_a, double s_b,
                                                   numerics::BoundaryCondition left,
                                                   numerics::BoundaryCondition right);

/// Index of the free-boundary surface truncated at |X| = R for each R,
/// with the natural condition on the boundary sphere and Dirichlet at |X| = R.
IndexReport morse_index_profile(const metrics::ConformalMetric& metric,
                                const profile::ProfileCurve& curve, int l_max,
                                const std::vector<double>& R_list,
                                const numerics::SturmLiouvilleSettings& settings = {},
                                int jobs = 1);

}  // namespace fbmin::spectral
