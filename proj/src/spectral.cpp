#include "fbmin/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <thread>

#include "fbmin/errors.hpp"

namespace fbmin::spectral {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void check_km(double k, double m) {
  if (!(k >= 1.0) || !std::isfinite(k)) throw DomainError("exponent k must satisfy k >= 1");
  if (std::abs(k - 1.5) < 1e-12) throw DomainError("k = 3/2 is not allowed in dimension 3");
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("mass m must be positive");
}

void check_radius(double k, double m, double r) {
  check_km(k, m);
  const double R0 = horizon_radius3(k, m);
  if (!(r >= R0 * (1.0 - 1e-12))) {
    throw DomainError("radius r = " + std::to_string(r) + " lies inside the horizon R0 = " +
                      std::to_string(R0));
  }
}

// (2 r^{3/k} + m r^2)^2 and r^{3/k}.
struct Parts {
  double p;
  double d2;
};
Parts parts(double k, double m, double r) {
  const double p = std::pow(r, 3.0 / k);
  const double d = 2.0 * p + m * r * r;
  return {p, d * d};
}

bool within_hypothesis(double k, bool cond311) { return (k > 1.0 && k <= 1.2) || cond311; }

// Runs fn(i) for i in [0, count) on up to jobs threads.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ModeJob {
  int l;
  double R;
};

void validate_index_inputs(const std::vector<double>& R_list, int l_max) {
  if (R_list.empty()) throw DomainError("R list is empty");
  for (std::size_t i = 1; i < R_list.size(); ++i) {
    if (!(R_list[i] > R_list[i - 1])) throw DomainError("R list must be strictly increasing");
  }
  if (l_max < 0) throw DomainError("l_max must be nonnegative");
}

void summarize(IndexReport& rep) {
  std::sort(rep.counts.begin(), rep.counts.end(), [](const ModeCount& a, const ModeCount& b) {
    return a.l != b.l ? a.l < b.l : a.R < b.R;
  });
  const std::size_t nr = rep.R_sequence.size();
  rep.index = 0;
  rep.stabilized = true;
  rep.monotone = true;
  rep.grids_converged = true;
  for (int l = 0; l <= rep.l_max; ++l) {
    const ModeCount* row = &rep.counts[static_cast<std::size_t>(l) * nr];
    for (std::size_t j = 0; j < nr; ++j) {
      rep.grids_converged = rep.grids_converged && row[j].converged;
      if (j > 0 && row[j].count < row[j - 1].count) rep.monotone = false;
    }
    if (nr >= 2 && row[nr - 1].count != row[nr - 2].count) rep.stabilized = false;
    rep.index += (l == 0 ? 1 : 2) * row[nr - 1].count;
  }
  if (nr < 2) rep.stabilized = false;
}

// Relative residual of  int p v'^2 + boundary - int v^2 A_lambda  for the ground mode.
double identity_residual(const numerics::SturmLiouvilleProblem& problem, int grid) {
  const auto sys = numerics::discretize(problem, grid);
  if (numerics::count_below(sys, 0.0) < 1) return nan;
  const double lambda = numerics::smallest_eigenvalue(sys);
  const auto v = numerics::ground_state(sys, lambda);
  const auto f = numerics::discrete_forms(sys, v);
  const double lhs = f.gradient + f.boundary;
  const double rhs = -f.potential + lambda * f.norm;
  return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

double horizon_radius3(double k, double m) {
  check_km(k, m);
  return std::pow(m / 2.0, k / (3.0 - 2.0 * k));
}

double scalar_curvature_factor(double k, double m, double r) {
  check_radius(k, m, r);
  const Parts q = parts(k, m, r);
  return 48.0 * (k - 1.0) * m * q.p / (k * q.d2);
}

double potential_Q(double k, double m, double r) {
  check_radius(k, m, r);
  const Parts q = parts(k, m, r);
  return 4.0 * (4.0 * k - 3.0) * m * q.p / (k * q.d2);
}

double potential_Q_two_term(double k, double m, double r) {
  check_radius(k, m, r);
  const Parts q = parts(k, m, r);
  const double base = 1.0 + m / (2.0 * std::pow(r, 3.0 / k - 2.0));
  const double laplacian = (3.0 - 2.0 * k) / k * m / q.p / (base * base);
  return laplacian + 24.0 * (k - 1.0) * m * q.p / (k * q.d2);
}

double conformal_weight(double k, double m, double r) {
  check_radius(k, m, r);
  const double base = 1.0 + m / (2.0 * std::pow(r, 3.0 / k - 2.0));
  return std::pow(base, 4.0 * k / (3.0 - 2.0 * k));
}

double a_lambda(double k, double m, int l, double lambda, double r) {
  return (0.25 - static_cast<double>(l) * l) / (r * r) + potential_Q(k, m, r) +
         lambda * conformal_weight(k, m, r);
}

BoundCheck q_bound_check(double k, double m, const std::vector<double>& r_grid) {
  BoundCheck out{true, 0.0, nan};
  for (double r : r_grid) {
    const double ratio = potential_Q(k, m, r) * r * r / 0.75;
    if (ratio > out.worst_ratio || std::isnan(out.worst_r)) {
      out.worst_ratio = ratio;
      out.worst_r = r;
    }
    // k = 6/5 attains equality at R0; allow roundoff there.
    if (ratio > 1.0 + 1e-12) out.holds = false;
  }
  return out;
}

double condition_311_lhs(double k, double m, double r) {
  check_radius(k, m, r);
  const Parts q = parts(k, m, r);
  return 4.0 * m * q.p * r * r / q.d2;
}

Condition311 condition_311(double k, double m, int grid_points) {
  check_km(k, m);
  if (!(k > 1.0)) throw DomainError("the large-mass condition is stated for k > 1");
  if (grid_points < 2) throw DomainError("need at least 2 grid points");
  const double R0 = horizon_radius3(k, m);
  const double R1 = 1e6 * R0;
  Condition311 out{true, -1.0, nan};
  auto consider = [&](double r) {
    const double e = condition_311_lhs(k, m, r);
    if (e > out.sup) {
      out.sup = e;
      out.sup_r = r;
    }
  };
  for (int i = 0; i < grid_points; ++i) {
    consider(R0 * std::pow(R1 / R0, static_cast<double>(i) / (grid_points - 1)));
  }
  // The expression is 2ab/(a+b)^2 with a = 2 r^{3/k}, b = m r^2; its only
  // critical point is a = b.
  const auto balance = [&](double r) {
    return std::log(2.0) + (3.0 / k) * std::log(r) - std::log(m) - 2.0 * std::log(r);
  };
  const double lo = balance(R0), hi = balance(R1);
  if (lo == 0.0) {
    consider(R0);
  } else if ((lo > 0.0) != (hi > 0.0)) {
    consider(numerics::find_root(balance, R0, R1));
  }
  out.holds = out.sup <= 3.0 / 16.0;
  return out;
}

numerics::SturmLiouvilleProblem mode_problem(double k, double m, int l, double R) {
  check_km(k, m);
  if (l < 0) throw DomainError("mode index l must be nonnegative");
  const double R0 = horizon_radius3(k, m);
  if (!(R > R0)) throw DomainError("truncation radius must exceed R0");
  numerics::SturmLiouvilleProblem p;
  const double l2 = static_cast<double>(l) * l;
  p.potential = [=](double r) { return -((0.25 - l2) / (r * r) + potential_Q(k, m, r)); };
  p.weight = [=](double r) { return conformal_weight(k, m, r); };
  p.a = R0;
  p.b = R;
  p.left = numerics::BoundaryCondition::robin(1.0 / (2.0 * R0));
  p.right = numerics::BoundaryCondition::dirichlet();
  p.spacing = numerics::GridSpacing::logarithmic;
  return p;
}

numerics::EigenCount mode_negative_count(double k, double m, int l, double R,
                                         const numerics::SturmLiouvilleSettings& settings) {
  return numerics::sl_negative_count(mode_problem(k, m, l, R), settings);
}

IndexReport morse_index_sigma0(double k, double m, const std::vector<double>& R_list, int l_max,
                               const numerics::SturmLiouvilleSettings& settings, int jobs) {
  check_km(k, m);
  validate_index_inputs(R_list, l_max);
  if (l_max < 3) throw DomainError("l_max must be at least 3");
  IndexReport rep;
  rep.k = k;
  rep.m = m;
  rep.R_sequence = R_list;
  rep.l_max = l_max;
  rep.condition_311 = k > 1.0 ? condition_311(k, m).holds : false;
  rep.within_hypothesis = within_hypothesis(k, rep.condition_311);
  if (!rep.within_hypothesis) {
    rep.note = k == 1.0 ? "k = 1: classical Schwarzschild, outside k in (1, 6/5]"
                        : "outside k in (1, 6/5] and the large-mass condition fails";
  }

  std::vector<ModeJob> jobs_list;
  for (int l = 0; l <= l_max; ++l) {
    for (double R : R_list) jobs_list.push_back({l, R});
  }
  rep.counts.resize(jobs_list.size());
  parallel_for(jobs_list.size(), jobs, [&](std::size_t i) {
    const auto& j = jobs_list[i];
    const auto c = mode_negative_count(k, m, j.l, j.R, settings);
    rep.counts[i] = {j.l, j.R, c.negative_count, c.smallest_eigenvalue, c.grid_size, c.converged};
  });
  summarize(rep);

  const ModeCount& ground = rep.counts[R_list.size() - 1];
  rep.identity_residual = identity_residual(mode_problem(k, m, 0, R_list.back()), ground.grid);
  return rep;
}

double riccati_f(double alpha, double m, double rho) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  if (!(rho > 0.0) || !(m > 0.0)) throw DomainError("riccati_f needs rho > 0 and m > 0");
  const double y = std::pow(2.0 * rho / m, alpha);
  return (1.0 - alpha * (2.0 / (1.0 + y) - 1.0)) / (2.0 * rho);
}

double riccati_f_prime(double alpha, double m, double rho) {
  if (!(alpha >= 0.0)) throw DomainError("alpha must be nonnegative");
  if (!(rho > 0.0) || !(m > 0.0)) throw DomainError("riccati_f needs rho > 0 and m > 0");
  const double y = std::pow(2.0 * rho / m, alpha);
  const double T = (1.0 - y) / (1.0 + y);
  return -(1.0 - alpha * T) / (2.0 * rho * rho) +
         alpha * alpha * y / (rho * rho * (1.0 + y) * (1.0 + y));
}

namespace {
double riccati_alpha(int l) {
  if (l < 1) throw DomainError("the Riccati comparison needs l >= 1 (4 l^2 - 3 > 0)");
  return std::sqrt(4.0 * l * l - 3.0);
}
}  // namespace

double riccati_floor(double k, double m, int l, double r) {
  const double alpha = riccati_alpha(l);
  check_radius(k, m, r);
  const double a0 = m / (2.0 * horizon_radius3(k, m));
  return a0 * riccati_f(alpha, m, a0 * r);
}

double riccati_floor_prime(double k, double m, int l, double r) {
  const double alpha = riccati_alpha(l);
  check_radius(k, m, r);
  const double a0 = m / (2.0 * horizon_radius3(k, m));
  return a0 * a0 * riccati_f_prime(alpha, m, a0 * r);
}

double rayleigh_quotient(double k, double m, const TestFunction& f, double R, int l,
                         const std::vector<double>& breakpoints) {
  check_km(k, m);
  if (!f.v || !f.dv) throw DomainError("test function needs value and derivative");
  const double R0 = horizon_radius3(k, m);
  if (!(R > R0)) throw DomainError("truncation radius must exceed R0");
  std::vector<double> cuts{R0};
  for (double b : breakpoints) {
    if (b > R0 && b < R) cuts.push_back(b);
  }
  for (double d = 10.0 * R0; d < R; d *= 10.0) cuts.push_back(d);
  cuts.push_back(R);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  numerics::QuadSettings qs;
  qs.rel_tol = 1e-11;
  qs.abs_tol = 1e-14;
  qs.max_intervals = 20000;
  const double l2 = static_cast<double>(l) * l;
  double form = 0.0, norm = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    form += numerics::quad_adaptive(
                [&](double r) {
                  const double v = f.v(r), dv = f.dv(r);
                  return dv * dv - ((0.25 - l2) / (r * r) + potential_Q(k, m, r)) * v * v;
                },
                a, b, qs)
                .value;
    norm += numerics::quad_adaptive(
                [&](double r) {
                  const double v = f.v(r);
                  return conformal_weight(k, m, r) * v * v;
                },
                a, b, qs)
                .value;
  }
  const double v0 = f.v(R0);
  form += v0 * v0 / (2.0 * R0);
  if (!(norm > 0.0)) throw DomainError("test function has zero weighted norm");
  return form / norm;
}

TestFunction piecewise_linear(const std::vector<double>& nodes, const std::vector<double>& values) {
  if (nodes.size() != values.size() || nodes.size() < 2) {
    throw DomainError("piecewise_linear needs matching node and value lists");
  }
  auto locate = [nodes](double r) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(i, nodes.size() - 2);
  };
  TestFunction f;
  f.v = [nodes, values, locate](double r) {
    const std::size_t i = locate(r);
    const double w = (r - nodes[i]) / (nodes[i + 1] - nodes[i]);
    return values[i] + w * (values[i + 1] - values[i]);
  };
  f.dv = [nodes, values, locate](double r) {
    const std::size_t i = locate(r);
    return (values[i + 1] - values[i]) / (nodes[i + 1] - nodes[i]);
  };
  return f;
}

double jacobi_potential(const metrics::ConformalMetric& metric, const geometry::CurvePoint& p) {
  if (metric.n() != 3) throw DomainError("the Jacobi potential is implemented for n = 3");
  const double s = p.x * p.x + p.t * p.t;
  const double up = metric.u_prime(s);
  const double u2 = metric.u_second(s);
  const double radial = p.x * p.cos_phi + p.t * p.sin_phi;   // <X, T>
  const double support = p.t * p.cos_phi - p.x * p.sin_phi;  // <X, N>
  const double k1 = p.k1;
  const double k2 = p.sin_phi / p.x;
  // f = u(|X|^2) restricted to the surface: f_s = 2 u' <X,T>.
  const double f_s = 2.0 * up * radial;
  const double f_ss = 4.0 * u2 * radial * radial + 2.0 * up * (1.0 + support * k1);
  const double lap_f = f_ss + p.cos_phi / p.x * f_s;
  // e^{2f} R_g = -(4 Delta f + 2 |grad f|^2) in R^3.
  const double scaled_scalar = -(24.0 * up + 16.0 * s * u2 + 8.0 * s * up * up);
  const double H = k1 + k2;
  return 0.5 * scaled_scalar + lap_f + k1 * k1 + k2 * k2 - 0.75 * H * H;
}

CurveInterpolant::CurveInterpolant(std::vector<geometry::Segment> segments)
    : segments_(std::move(segments)) {
  // 8-point Gauss-Legendre.
  static constexpr double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                   0.9602898564975363};
  static constexpr double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                   0.1012285362903763};
  double s = 0.0;
  double reach = 0.0;
  for (std::size_t g = 0; g < segments_.size(); ++g) {
    const auto& pts = segments_[g].points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      Interval iv{g, i, s, s};
      const double mid = 0.5 * (pts[i].param + pts[i + 1].param);
      const double half = 0.5 * (pts[i + 1].param - pts[i].param);
      double len = 0.0;
      for (int j = 0; j < 4; ++j) {
        len += gw[j] * (eval(iv, mid - half * gx[j]).ds + eval(iv, mid + half * gx[j]).ds);
      }
      s += std::abs(half) * len;
      iv.s1 = s;
      const auto end = eval(iv, pts[i + 1].param);
      if (intervals_.empty()) {
        const auto start = eval(iv, pts[i].param);
        reach = std::hypot(start.x, start.t);
      }
      reach = std::max(reach, std::hypot(end.x, end.t));
      intervals_.push_back(iv);
      cumulative_.push_back(iv.s0);
      reach_.push_back(reach);
    }
  }
  if (intervals_.empty()) throw DomainError("curve interpolant needs at least two points");
  cumulative_.push_back(s);
}

CurveInterpolant CurveInterpolant::from_profile(const metrics::ConformalMetric& metric,
                                                const profile::ProfileCurve& curve) {
  std::vector<geometry::Segment> segs;
  geometry::Segment graph{geometry::Parametrization::graph_over_t, {}};
  const double limit =
      curve.parametrization_switch.value_or(std::numeric_limits<double>::infinity());
  for (const auto& s : curve.samples) {
    if (s.t > limit) break;
    graph.points.push_back({s.t, s.x, s.xp, profile::rhs(metric, s.t, s.x, s.xp)});
  }
  segs.push_back(std::move(graph));
  if (!curve.radial.empty()) {
    geometry::Segment radial{geometry::Parametrization::graph_over_x, {}};
    for (const auto& r : curve.radial) {
      radial.points.push_back({r.x, r.t, r.tp, profile::radial_rhs(metric, r.x, r.t, r.tp)});
    }
    segs.push_back(std::move(radial));
  }
  return CurveInterpolant(std::move(segs));
}

geometry::CurvePoint CurveInterpolant::eval(const Interval& iv, double param) const {
  const auto& seg = segments_[iv.segment];
  const auto& p = seg.points[iv.index];
  const auto& q = seg.points[iv.index + 1];
  const auto v = numerics::hermite_quintic(p.param, q.param, {p.a, p.ap, p.app},
                                           {q.a, q.ap, q.app}, param);
  return seg.kind == geometry::Parametrization::graph_over_t
             ? geometry::from_graph(param, v.y, v.yp, v.ypp)
             : geometry::from_radial(param, v.y, v.yp, v.ypp);
}

geometry::CurvePoint CurveInterpolant::at(double s) const {
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end() - 1, s);
  std::size_t k = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  k = std::min(k, intervals_.size() - 1);
  const Interval& iv = intervals_[k];
  const auto& pts = segments_[iv.segment].points;
  const double p0 = pts[iv.index].param, p1 = pts[iv.index + 1].param;
  if (s <= iv.s0) return eval(iv, p0);
  if (s >= iv.s1) return eval(iv, p1);
  // Arclength from p0 to z by 8-point Gauss-Legendre.
  static constexpr double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                   0.9602898564975363};
  static constexpr double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                   0.1012285362903763};
  auto arc = [&](double z) {
    const double mid = 0.5 * (p0 + z), half = 0.5 * (z - p0);
    double len = 0.0;
    for (int j = 0; j < 4; ++j) {
      len += gw[j] * (eval(iv, mid - half * gx[j]).ds + eval(iv, mid + half * gx[j]).ds);
    }
    return iv.s0 + std::abs(half) * len - s;
  };
  const double z = numerics::find_root(arc, p0, p1);
  return eval(iv, z);
}

double CurveInterpolant::arclength_at_radius(double R) const {
  auto it = std::lower_bound(reach_.begin(), reach_.end(), R);
  if (it == reach_.end()) {
    throw DomainError("curve never reaches |X| = " + std::to_string(R));
  }
  const Interval& iv = intervals_[static_cast<std::size_t>(it - reach_.begin())];
  auto radius = [&](double s) {
    const auto p = at(s);
    return std::hypot(p.x, p.t) - R;
  };
  if (radius(iv.s0) >= 0.0) return iv.s0;
  if (radius(iv.s1) < 0.0) return iv.s1;  // reach attained inside the interval only
  return numerics::find_root(radius, iv.s0, iv.s1);
}

numerics::SturmLiouvilleProblem curve_mode_problem(const metrics::ConformalMetric& metric,
                                                   const CurveInterpolant& curve, int l,
                                                   double s_a, double s_b,
                                                   numerics::BoundaryCondition left,
                                                   numerics::BoundaryCondition right) {
  if (l < 0) throw DomainError("mode index l must be nonnegative");
  if (!(s_b > s_a)) throw DomainError("arclength window must satisfy s_b > s_a");
  const double l2 = static_cast<double>(l) * l;
  numerics::SturmLiouvilleProblem p;
  p.stiffness = [&curve](double s) { return curve.at(s).x; };
  p.potential = [&metric, &curve, l2](double s) {
    const auto q = curve.at(s);
    return l2 / q.x - q.x * jacobi_potential(metric, q);
  };
  p.weight = [&metric, &curve](double s) {
    const auto q = curve.at(s);
    return q.x * std::exp(2.0 * metric.u(q.x * q.x + q.t * q.t));
  };
  p.a = s_a;
  p.b = s_b;
  p.left = left;
  p.right = right;
  p.spacing = numerics::GridSpacing::logarithmic;
  p.log_offset = curve.at(s_a).x - s_a;
  return p;
}

IndexReport morse_index_profile(const metrics::ConformalMetric& metric,
                                const profile::ProfileCurve& curve, int l_max,
                                const std::vector<double>& R_list,
                                const numerics::SturmLiouvilleSettings& settings, int jobs) {
  if (metric.n() != 3) throw DomainError("profile index is implemented for n = 3");
  validate_index_inputs(R_list, l_max);
  const CurveInterpolant interp = CurveInterpolant::from_profile(metric, curve);
  IndexReport rep;
  if (const auto& sp = metric.schwarzschild()) {
    rep.k = sp->k;
    rep.m = sp->m;
    rep.condition_311 = sp->k > 1.0 && sp->k != 1.5 ? condition_311(sp->k, sp->m).holds : false;
    rep.within_hypothesis = within_hypothesis(sp->k, rep.condition_311);
  }
  rep.R_sequence = R_list;
  rep.l_max = l_max;
  rep.note = "natural boundary condition on the boundary sphere";

  std::vector<double> s_end;
  for (double R : R_list) s_end.push_back(interp.arclength_at_radius(R));

  std::vector<ModeJob> jobs_list;
  for (int l = 0; l <= l_max; ++l) {
    for (double R : R_list) jobs_list.push_back({l, R});
  }
  rep.counts.resize(jobs_list.size());
  parallel_for(jobs_list.size(), jobs, [&](std::size_t i) {
    const auto& j = jobs_list[i];
    const std::size_t r_index = i % R_list.size();
    const auto problem =
        curve_mode_problem(metric, interp, j.l, 0.0, s_end[r_index],
                           numerics::BoundaryCondition::neumann(),
                           numerics::BoundaryCondition::dirichlet());
    const auto c = numerics::sl_negative_count(problem, settings);
    rep.counts[i] = {j.l, j.R, c.negative_count, c.smallest_eigenvalue, c.grid_size, c.converged};
  });
  summarize(rep);
  const auto ground_problem =
      curve_mode_problem(metric, interp, 0, 0.0, s_end.back(),
                         numerics::BoundaryCondition::neumann(),
                         numerics::BoundaryCondition::dirichlet());
  rep.identity_residual = identity_residual(ground_problem, rep.counts[R_list.size() - 1].grid);
  return rep;
}

}  // namespace fbmin::spectral
