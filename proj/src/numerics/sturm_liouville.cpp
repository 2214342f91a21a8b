#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fbmin/errors.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::numerics {

namespace {

std::vector<double> make_nodes(const SturmLiouvilleProblem& p, int intervals) {
  std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
  if (p.spacing == GridSpacing::uniform) {
    const double h = (p.b - p.a) / intervals;
    for (int i = 0; i <= intervals; ++i) nodes[i] = p.a + h * i;
  } else {
    const double la = std::log(p.a + p.log_offset);
    const double lb = std::log(p.b + p.log_offset);
    const double h = (lb - la) / intervals;
    for (int i = 0; i <= intervals; ++i) nodes[i] = std::exp(la + h * i) - p.log_offset;
  }
  nodes.front() = p.a;
  nodes.back() = p.b;
  return nodes;
}

// Pivot recurrence of LDL^T for K - lambda M; returns the number of negative pivots.
int sturm_count(const DiscreteSturmLiouville& s, double lambda) {
  const int n = s.unknowns();
  int negatives = 0;
  double d = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (int i = 0; i < n; ++i) {
    double a = s.diag[i] - lambda * s.mass[i];
    if (i > 0) a -= s.off[i - 1] * s.off[i - 1] / d;
    if (a == 0.0) a = -tiny;
    if (a < 0.0) ++negatives;
    d = a;
  }
  return negatives;
}

void gershgorin(const DiscreteSturmLiouville& s, double& lo, double& hi) {
  const int n = s.unknowns();
  lo = std::numeric_limits<double>::infinity();
  hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double center = s.diag[i] / s.mass[i];
    double radius = 0.0;
    if (i > 0) radius += std::abs(s.off[i - 1]) / std::sqrt(s.mass[i] * s.mass[i - 1]);
    if (i + 1 < n) radius += std::abs(s.off[i]) / std::sqrt(s.mass[i] * s.mass[i + 1]);
    lo = std::min(lo, center - radius);
    hi = std::max(hi, center + radius);
  }
}

}  // namespace

DiscreteSturmLiouville discretize(const SturmLiouvilleProblem& p, int intervals) {
  if (intervals < 2) throw DomainError("Sturm-Liouville grid needs at least 2 intervals");
  if (!(p.b > p.a)) throw DomainError("Sturm-Liouville interval must satisfy b > a");
  if (!p.potential || !p.weight) {
    throw DomainError("Sturm-Liouville problem needs potential and weight");
  }
  if (p.spacing == GridSpacing::logarithmic && !(p.a + p.log_offset > 0.0)) {
    throw DomainError("logarithmic grid needs a + log_offset > 0");
  }

  DiscreteSturmLiouville s;
  s.nodes = make_nodes(p, intervals);
  const int nn = intervals + 1;
  s.node_potential.resize(nn);
  s.node_weight.resize(nn);
  for (int i = 0; i < nn; ++i) {
    s.node_potential[i] = p.potential(s.nodes[i]);
    s.node_weight[i] = p.weight(s.nodes[i]);
    if (!(s.node_weight[i] > 0.0) || !std::isfinite(s.node_potential[i])) {
      throw DomainError("Sturm-Liouville coefficients invalid at x = " +
                        std::to_string(s.nodes[i]));
    }
  }
  s.cell_stiffness.resize(intervals);
  for (int c = 0; c < intervals; ++c) {
    const double mid = 0.5 * (s.nodes[c] + s.nodes[c + 1]);
    s.cell_stiffness[c] = p.stiffness ? p.stiffness(mid) : 1.0;
    if (!(s.cell_stiffness[c] > 0.0)) {
      throw DomainError("Sturm-Liouville stiffness must be positive");
    }
  }

  s.left_dirichlet = p.left.kind == BoundaryKind::dirichlet;
  s.right_dirichlet = p.right.kind == BoundaryKind::dirichlet;
  s.left_robin = s.left_dirichlet ? 0.0 : p.left.slope;
  s.right_robin = s.right_dirichlet ? 0.0 : p.right.slope;
  s.first_unknown = s.left_dirichlet ? 1 : 0;
  const int last_unknown = s.right_dirichlet ? nn - 2 : nn - 1;
  const int n = last_unknown - s.first_unknown + 1;
  if (n < 1) throw DomainError("Sturm-Liouville grid has no unknowns");

  s.diag.assign(n, 0.0);
  s.mass.assign(n, 0.0);
  s.off.assign(std::max(0, n - 1), 0.0);
  for (int k = 0; k < n; ++k) {
    const int i = s.first_unknown + k;
    double diag = 0.0;
    double cell = 0.0;
    if (i > 0) {
      const double h = s.nodes[i] - s.nodes[i - 1];
      diag += s.cell_stiffness[i - 1] / h;
      cell += 0.5 * h;
    }
    if (i < nn - 1) {
      const double h = s.nodes[i + 1] - s.nodes[i];
      diag += s.cell_stiffness[i] / h;
      cell += 0.5 * h;
      if (k + 1 < n) s.off[k] = -s.cell_stiffness[i] / h;
    }
    diag += s.node_potential[i] * cell;
    if (i == 0) diag += s.left_robin;
    if (i == nn - 1) diag -= s.right_robin;
    s.diag[k] = diag;
    s.mass[k] = s.node_weight[i] * cell;
  }
  return s;
}

int count_below(const DiscreteSturmLiouville& system, double lambda) {
  return sturm_count(system, lambda);
}

double smallest_eigenvalue(const DiscreteSturmLiouville& system) {
  double lo = 0.0;
  double hi = 0.0;
  gershgorin(system, lo, hi);
  // Keep the bracket consistent with the count at zero so that the sign of
  // the result always agrees with count_below(0).
  if (sturm_count(system, 0.0) >= 1) {
    hi = 0.0;
  } else {
    lo = 0.0;
    hi = std::max(hi, 1.0);
    while (sturm_count(system, hi) < 1) hi *= 2.0;
  }
  lo = std::min(lo, hi - 1.0);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(system, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(hi)) break;
  }
  // hi always has count >= 1, so a negative count at 0 yields hi < 0 or hi == 0.
  if (hi == 0.0 && sturm_count(system, 0.0) >= 1) return lo;
  return hi;
}

std::vector<double> ground_state(const DiscreteSturmLiouville& s, double lambda_min) {
  const int n = s.unknowns();
  const double shift = lambda_min - 1e-9 * std::max(1.0, std::abs(lambda_min));
  // Thomas factorization of K - shift M (positive definite for shift < lambda_min).
  std::vector<double> c(n), d(n);
  std::vector<double> x(n, 1.0);
  auto solve = [&](const std::vector<double>& rhs) {
    std::vector<double> out(n);
    double denom = s.diag[0] - shift * s.mass[0];
    c[0] = n > 1 ? s.off[0] / denom : 0.0;
    d[0] = rhs[0] / denom;
    for (int i = 1; i < n; ++i) {
      denom = (s.diag[i] - shift * s.mass[i]) - s.off[i - 1] * c[i - 1];
      c[i] = i + 1 < n ? s.off[i] / denom : 0.0;
      d[i] = (rhs[i] - s.off[i - 1] * d[i - 1]) / denom;
    }
    out[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) out[i] = d[i] - c[i] * out[i + 1];
    return out;
  };
  auto normalize = [&](std::vector<double>& v) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += s.mass[i] * v[i] * v[i];
    norm = std::sqrt(norm);
    for (double& e : v) e /= norm;
  };
  normalize(x);
  for (int it = 0; it < 8; ++it) {
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = s.mass[i] * x[i];
    x = solve(rhs);
    normalize(x);
  }
  const auto peak = std::max_element(x.begin(), x.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*peak < 0.0) {
    for (double& e : x) e = -e;
  }
  std::vector<double> full(s.nodes.size(), 0.0);
  for (int k = 0; k < n; ++k) full[s.first_unknown + k] = x[k];
  return full;
}

DiscreteForms discrete_forms(const DiscreteSturmLiouville& s, const std::vector<double>& v) {
  if (v.size() != s.nodes.size()) throw DomainError("nodal vector has the wrong size");
  DiscreteForms f{0.0, 0.0, 0.0, 0.0};
  const std::size_t nn = s.nodes.size();
  for (std::size_t c = 0; c + 1 < nn; ++c) {
    const double h = s.nodes[c + 1] - s.nodes[c];
    const double dv = v[c + 1] - v[c];
    f.gradient += s.cell_stiffness[c] * dv * dv / h;
  }
  for (std::size_t i = 0; i < nn; ++i) {
    double cell = 0.0;
    if (i > 0) cell += 0.5 * (s.nodes[i] - s.nodes[i - 1]);
    if (i + 1 < nn) cell += 0.5 * (s.nodes[i + 1] - s.nodes[i]);
    f.potential += s.node_potential[i] * v[i] * v[i] * cell;
    f.norm += s.node_weight[i] * v[i] * v[i] * cell;
  }
  f.boundary = s.left_robin * v.front() * v.front() - s.right_robin * v.back() * v.back();
  return f;
}

EigenCount sl_count_on_grid(const SturmLiouvilleProblem& problem, int intervals) {
  const DiscreteSturmLiouville system = discretize(problem, intervals);
  EigenCount out;
  out.negative_count = count_below(system, 0.0);
  out.smallest_eigenvalue = smallest_eigenvalue(system);
  out.grid_size = intervals;
  out.converged = false;
  return out;
}

EigenCount sl_negative_count(const SturmLiouvilleProblem& problem,
                             const SturmLiouvilleSettings& settings) {
  if (settings.initial_grid < 2 || settings.max_grid < settings.initial_grid) {
    throw DomainError("invalid Sturm-Liouville grid settings");
  }
  EigenCount coarse = sl_count_on_grid(problem, settings.initial_grid);
  for (int n = 2 * settings.initial_grid; n <= settings.max_grid; n *= 2) {
    EigenCount fine = sl_count_on_grid(problem, n);
    if (fine.negative_count == coarse.negative_count) {
      fine.converged = true;
      return fine;
    }
    coarse = fine;
  }
  return coarse;
}

}  // namespace fbmin::numerics
