#pragma once

// Shared numerical kernels: explicit adaptive ODE integration, adaptive
// quadrature with power-law tail handling, bracketed root finding, quintic
// Hermite interpolation and negative-eigenvalue counting for discretized
// Sturm-Liouville problems.

#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace fbmin::numerics {

// ---------------------------------------------------------------------------
// ODE integration
// ---------------------------------------------------------------------------

struct OdeSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  /// When positive, steps are also capped at max_step_fraction * max(1, |t|).
  double max_step_fraction = 0.0;
  int max_steps = 500000;
  /// Zero selects the first step automatically.
  double initial_step = 0.0;

  /// Throws DomainError when a tolerance or budget is not positive.
  void validate() const;
};

/// State of a scalar second-order ODE y'' = f(t, y, y').
struct State {
  double y;
  double yp;
};

struct OdeSample {
  double t;
  double y;
  double yp;
};

using SecondOrderRhs = std::function<double(double t, double y, double yp)>;
using StopPredicate = std::function<bool(const OdeSample&)>;
using EventFunction = std::function<double(const OdeSample&)>;

enum class OdeStatus {
  reached_end,     // t_end was reached
  stopped,         // the stop predicate fired after an accepted step
  event,           // an event function changed sign; last sample sits on its root
  max_steps,       // step budget exhausted
  step_underflow,  // step size fell below roundoff level
  nonfinite,       // the right-hand side produced a non-finite value
};

std::string_view to_string(OdeStatus status);

struct Trajectory {
  std::vector<OdeSample> samples;  // includes the initial point
  OdeStatus status = OdeStatus::reached_end;
  double last_step = 0.0;
  int rejected_steps = 0;
};

/// Dormand-Prince 5(4) integration of y'' = rhs(t, y, y') from t0 towards
/// t_end, recording every accepted step.
///
/// The optional stop predicate is evaluated after each accepted step and ends
/// the integration with that sample included. The optional event function is
/// monitored for sign changes between accepted steps; its root is located to
/// roundoff and becomes the final sample.
Trajectory integrate_ode(const SecondOrderRhs& rhs, double t0, State y0, double t_end,
                         const OdeSettings& settings, const StopPredicate& stop = {},
                         const EventFunction& event = {});

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_intervals = 4000;
  /// Number of decade panels examined on [a, +inf) before giving up.
  int max_decades = 120;
  /// Tail powers p <= 1 + divergence_margin count as non-integrable.
  double divergence_margin = 1e-3;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool divergent = false;
  /// Local decay exponent p of |f(mu)| ~ C mu^-p on the last decade (improper only).
  double tail_power = std::numeric_limits<double>::quiet_NaN();
  int evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
/// A cubic smoothing substitution is applied first, which removes inverse
/// square-root endpoint singularities. Throws NumericalError on a non-finite
/// integrand value or when the interval budget is exhausted.
QuadResult quad_adaptive(const Integrand& f, double a, double b, const QuadSettings& settings = {});

/// Quadrature on [a, upper) where upper may be +infinity.
///
/// Infinite ranges are covered decade by decade; after each decade the decay
/// exponent p is read from the log-log slope of |f| and the remaining tail is
/// bounded analytically by f(b) b / (p - 1). The divergent flag is raised
/// (and value set to +-inf) when p stays within divergence_margin of 1 or
/// below on three consecutive decades.
QuadResult quad_improper(const Integrand& f, double a, double upper,
                         const QuadSettings& settings = {});

// ---------------------------------------------------------------------------
// Roots and interpolation
// ---------------------------------------------------------------------------

/// Bracketed root of f on [lo, hi] (TOMS 748). Throws DomainError when f(lo)
/// and f(hi) do not bracket a root.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 int max_iterations = 200);

struct HermiteValue {
  double y;
  double yp;
  double ypp;
};

/// Quintic Hermite interpolant matching value, first and second derivative
/// at both ends of [t0, t1], evaluated at t.
HermiteValue hermite_quintic(double t0, double t1, const HermiteValue& at0,
                             const HermiteValue& at1, double t);

// ---------------------------------------------------------------------------
// Sturm-Liouville eigenvalue counting
// ---------------------------------------------------------------------------

enum class BoundaryKind { dirichlet, robin };

/// Dirichlet v = 0, or Robin p v' = slope * v at the given end.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::dirichlet;
  double slope = 0.0;

  static BoundaryCondition dirichlet() { return {BoundaryKind::dirichlet, 0.0}; }
  static BoundaryCondition robin(double slope) { return {BoundaryKind::robin, slope}; }
  static BoundaryCondition neumann() { return {BoundaryKind::robin, 0.0}; }
};

enum class GridSpacing { uniform, logarithmic };

/// -(p v')' + q v = lambda w v on [a, b].
struct SturmLiouvilleProblem {
  std::function<double(double)> stiffness;  // p > 0; empty means p == 1
  std::function<double(double)> potential;  // q
  std::function<double(double)> weight;     // w > 0
  double a = 0.0;
  double b = 1.0;
  BoundaryCondition left = BoundaryCondition::dirichlet();
  BoundaryCondition right = BoundaryCondition::dirichlet();
  GridSpacing spacing = GridSpacing::uniform;
  /// Logarithmic grids are uniform in ln(x + log_offset); requires a + log_offset > 0.
  double log_offset = 0.0;
};

/// Symmetric tridiagonal pencil K - lambda M of the lumped linear finite
/// element (equivalently, ghost-point central difference) discretization.
struct DiscreteSturmLiouville {
  std::vector<double> nodes;  // all grid nodes, a .. b
  int first_unknown = 0;      // 1 when the left end is Dirichlet
  std::vector<double> diag;   // K diagonal over unknowns
  std::vector<double> off;    // K off-diagonal over unknowns
  std::vector<double> mass;   // lumped M diagonal over unknowns (includes w)
  std::vector<double> cell_stiffness;  // p at cell midpoints, one per cell
  std::vector<double> node_potential;  // q at all nodes
  std::vector<double> node_weight;     // w at all nodes
  double left_robin = 0.0;
  double right_robin = 0.0;
  bool left_dirichlet = true;
  bool right_dirichlet = true;

  int unknowns() const { return static_cast<int>(diag.size()); }
};

DiscreteSturmLiouville discretize(const SturmLiouvilleProblem& problem, int intervals);

/// Number of eigenvalues of the discrete pencil strictly below lambda
/// (Sturm sequence of LDL^T pivots).
int count_below(const DiscreteSturmLiouville& system, double lambda);

/// Smallest eigenvalue by Sturm bisection.
double smallest_eigenvalue(const DiscreteSturmLiouville& system);

/// Ground state by shifted inverse iteration, returned on all nodes (Dirichlet
/// ends hold zero) with unit discrete weighted norm and positive maximum.
std::vector<double> ground_state(const DiscreteSturmLiouville& system, double lambda_min);

/// Discrete quadratic form and weighted norm of a nodal vector.
struct DiscreteForms {
  double gradient;  // sum p (dv)^2 / h
  double boundary;  // left_robin v(a)^2 - right_robin v(b)^2
  double potential; // sum q v^2 m
  double norm;      // sum w v^2 m
};
DiscreteForms discrete_forms(const DiscreteSturmLiouville& system, const std::vector<double>& v);

struct EigenCount {
  int negative_count = 0;
  double smallest_eigenvalue = 0.0;
  int grid_size = 0;  // number of intervals of the accepted grid
  bool converged = false;
};

struct SturmLiouvilleSettings {
  int initial_grid = 2048;
  int max_grid = 1 << 17;
};

EigenCount sl_count_on_grid(const SturmLiouvilleProblem& problem, int intervals);

/// Counts negative eigenvalues, doubling the grid from initial_grid until two
/// consecutive grids agree. converged is false when max_grid is reached first.
EigenCount sl_negative_count(const SturmLiouvilleProblem& problem,
                             const SturmLiouvilleSettings& settings = {});

}  // namespace fbmin::numerics
