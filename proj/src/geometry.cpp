#include "fbmin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fbmin/errors.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::geometry {

namespace {

// 8-point Gauss-Legendre on [-1, 1].
constexpr double gl_x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                            0.9602898564975363};
constexpr double gl_w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                            0.1012285362903763};

CurvePoint make_point(Parametrization kind, double param, double a, double ap, double app) {
  return kind == Parametrization::graph_over_t ? from_graph(param, a, ap, app)
                                               : from_radial(param, a, ap, app);
}

struct Densities {
  double flat;
  double conf;
};

// Total-curvature densities per unit parameter for n = 3.
Densities densities(const ConformalMetric& g, const CurvePoint& p) {
  const double k2 = p.sin_phi / p.x;
  const double area = 2.0 * std::numbers::pi * p.x * p.ds;
  const double flat = 0.5 * (p.k1 - k2) * (p.k1 - k2) * area;
  const CurvatureSample c = conformal_curvatures(g, p);
  const double e2h = std::exp(2.0 * g.u(p.x * p.x + p.t * p.t));
  const double conf = (c.kbar[0] * c.kbar[0] + c.kbar[1] * c.kbar[1]) * e2h * area;
  return {flat, conf};
}

std::vector<Segment> segments_of(const ConformalMetric& g, const profile::ProfileCurve& curve) {
  std::vector<Segment> out;
  Segment graph{Parametrization::graph_over_t, {}};
  const double limit = curve.parametrization_switch.value_or(std::numeric_limits<double>::infinity());
  for (const auto& s : curve.samples) {
    if (s.t > limit) break;
    graph.points.push_back({s.t, s.x, s.xp, profile::rhs(g, s.t, s.x, s.xp)});
  }
  out.push_back(std::move(graph));
  if (!curve.radial.empty()) {
    Segment radial{Parametrization::graph_over_x, {}};
    for (const auto& r : curve.radial) {
      radial.points.push_back({r.x, r.t, r.tp, profile::radial_rhs(g, r.x, r.t, r.tp)});
    }
    out.push_back(std::move(radial));
  }
  return out;
}

}  // namespace

FlatCurvatures flat_curvatures(double t, double x, double xp, double xpp, int n) {
  (void)t;
  if (!(x > 0.0)) throw DomainError("curvatures need x > 0");
  if (n < 3) throw DomainError("dimension n must be at least 3");
  const double w = 1.0 + xp * xp;
  return {-xpp / (w * std::sqrt(w)), 1.0 / (x * std::sqrt(w))};
}

double support_function(double t, double x, double xp) {
  return (xp * t - x) / std::sqrt(1.0 + xp * xp);
}

CurvePoint from_graph(double t, double x, double xp, double xpp) {
  const double w = 1.0 + xp * xp;
  const double r = std::sqrt(w);
  return {x, t, xp / r, 1.0 / r, -xpp / (w * r), r};
}

CurvePoint from_radial(double x, double t, double tp, double tpp) {
  const double w = 1.0 + tp * tp;
  const double r = std::sqrt(w);
  return {x, t, 1.0 / r, tp / r, tpp / (w * r), r};
}

CurvatureSample conformal_curvatures(const ConformalMetric& metric, const CurvePoint& p) {
  if (!(p.x > 0.0)) throw DomainError("curvatures need x > 0");
  const int n = metric.n();
  const double s = p.x * p.x + p.t * p.t;
  const double up = metric.u_prime(s);
  const double eh = std::exp(-metric.u(s));
  CurvatureSample c;
  c.t = p.t;
  c.x = p.x;
  c.k1 = p.k1;
  c.k_rot = p.sin_phi / p.x;
  c.support = p.t * p.cos_phi - p.x * p.sin_phi;
  const double shift = 2.0 * up * c.support;
  c.kbar.assign(n - 1, eh * (c.k_rot - shift));
  c.kbar[0] = eh * (c.k1 - shift);
  c.H = c.k1 + (n - 2) * c.k_rot;
  c.Hbar = eh * (c.H - 2.0 * (n - 1) * up * c.support);
  return c;
}

std::vector<CurvatureSample> curvature_profile(const ConformalMetric& metric,
                                               const profile::ProfileCurve& curve) {
  std::vector<CurvatureSample> out;
  for (const auto& s : curve.samples) {
    const double xpp = profile::rhs(metric, s.t, s.x, s.xp);
    out.push_back(conformal_curvatures(metric, from_graph(s.t, s.x, s.xp, xpp)));
  }
  const double x_last = curve.samples.empty() ? 0.0 : curve.samples.back().x;
  for (const auto& r : curve.radial) {
    if (r.x <= x_last) continue;
    const double tpp = profile::radial_rhs(metric, r.x, r.t, r.tp);
    out.push_back(conformal_curvatures(metric, from_radial(r.x, r.t, r.tp, tpp)));
  }
  return out;
}

CurvatureReport total_curvature_segments(const ConformalMetric& metric,
                                         const std::vector<Segment>& segments,
                                         double convergence_fraction) {
  if (metric.n() != 3) throw DomainError("total curvature is computed for surfaces (n = 3)");
  CurvatureReport rep;
  std::vector<double> radius;  // running maximum of |X| at each point
  double reach = 0.0;
  auto record = [&](double x, double t) {
    reach = std::max(reach, std::hypot(x, t));
    radius.push_back(reach);
    rep.cumulative.push_back(rep.flat_total);
    rep.conf_cumulative.push_back(rep.conf_total);
  };

  for (const Segment& seg : segments) {
    const auto& pts = seg.points;
    if (pts.empty()) continue;
    const auto xt = [&](const ParamPoint& q) {
      return seg.kind == Parametrization::graph_over_t ? std::pair{q.a, q.param}
                                                       : std::pair{q.param, q.a};
    };
    if (rep.cumulative.empty()) {
      const auto [x, t] = xt(pts.front());
      record(x, t);
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const ParamPoint& p = pts[i];
      const ParamPoint& q = pts[i + 1];
      const numerics::HermiteValue hp{p.a, p.ap, p.app};
      const numerics::HermiteValue hq{q.a, q.ap, q.app};
      const double mid = 0.5 * (p.param + q.param);
      const double half = 0.5 * (q.param - p.param);
      double flat = 0.0, conf = 0.0;
      for (int j = 0; j < 4; ++j) {
        for (double sign : {-1.0, 1.0}) {
          const double z = mid + sign * half * gl_x[j];
          const auto v = numerics::hermite_quintic(p.param, q.param, hp, hq, z);
          const Densities d = densities(metric, make_point(seg.kind, z, v.y, v.yp, v.ypp));
          flat += gl_w[j] * d.flat;
          conf += gl_w[j] * d.conf;
        }
      }
      rep.flat_total += std::abs(half) * flat;
      rep.conf_total += std::abs(half) * conf;
      const auto [x, t] = xt(q);
      record(x, t);
    }
  }
  if (radius.size() < 2) throw DomainError("curve has fewer than two points");

  const double r_first = radius.front();
  const double r_last = radius.back();
  rep.tail_estimate = std::numeric_limits<double>::infinity();
  // Convergence is judged on decades of |X|, so it needs at least one.
  if (!(r_last >= 10.0 * r_first)) return rep;

  // Cumulative value at |X| = c by linear interpolation in the running maximum.
  auto value_at = [&](const std::vector<double>& cum, double c) {
    const auto it = std::lower_bound(radius.begin(), radius.end(), c);
    if (it == radius.begin()) return cum.front();
    if (it == radius.end()) return cum.back();
    const std::size_t i = static_cast<std::size_t>(it - radius.begin());
    const double span = radius[i] - radius[i - 1];
    const double w = span > 0.0 ? (c - radius[i - 1]) / span : 1.0;
    return cum[i - 1] + w * (cum[i] - cum[i - 1]);
  };
  for (double c = std::pow(10.0, std::floor(std::log10(r_first)) + 1.0); c < r_last * (1.0 - 1e-9);
       c *= 10.0) {
    rep.partials.push_back({c, value_at(rep.cumulative, c)});
    rep.conf_partials.push_back({c, value_at(rep.conf_cumulative, c)});
  }
  rep.partials.push_back({r_last, rep.flat_total});
  rep.conf_partials.push_back({r_last, rep.conf_total});

  const auto last_decade = [&](const std::vector<double>& cum) {
    return cum.back() - value_at(cum, r_last / 10.0);
  };
  const double last = last_decade(rep.cumulative);
  const double last_conf = last_decade(rep.conf_cumulative);
  rep.converged = std::abs(last) < convergence_fraction * std::abs(rep.flat_total) &&
                  std::abs(last_conf) < convergence_fraction * std::abs(rep.conf_total);
  const double prev = value_at(rep.cumulative, r_last / 10.0) - value_at(rep.cumulative, r_last / 100.0);
  if (r_last >= 100.0 * r_first && last >= 0.0 && last < prev) {
    const double ratio = last / prev;
    rep.tail_estimate = last * ratio / (1.0 - ratio);
  }
  return rep;
}

CurvatureReport total_curvature(const ConformalMetric& metric, const profile::ProfileCurve& curve,
                                double convergence_fraction) {
  if (curve.samples.size() < 2) throw DomainError("profile has fewer than two samples");
  return total_curvature_segments(metric, segments_of(metric, curve), convergence_fraction);
}

std::vector<CurvePoint> curve_points(const ConformalMetric& metric,
                                     const profile::ProfileCurve& curve) {
  std::vector<CurvePoint> out;
  for (const Segment& seg : segments_of(metric, curve)) {
    for (std::size_t i = out.empty() ? 0 : 1; i < seg.points.size(); ++i) {
      const ParamPoint& q = seg.points[i];
      out.push_back(make_point(seg.kind, q.param, q.a, q.ap, q.app));
    }
  }
  return out;
}

std::vector<double> conformal_norm_squared(const ConformalMetric& metric,
                                           const profile::ProfileCurve& curve) {
  std::vector<double> out;
  for (const auto& c : curvature_profile(metric, curve)) {
    double sum = 0.0;
    for (double k : c.kbar) sum += k * k;
    out.push_back(sum);
  }
  return out;
}

MajorantCheck check_majorants(const ConformalMetric& metric, const profile::ProfileCurve& curve,
                              double a) {
  if (metric.n() != 3) throw DomainError("majorant check is stated for n = 3");
  MajorantCheck out;
  for (const auto& s : curve.samples) {
    const double xpp = profile::rhs(metric, s.t, s.x, s.xp);
    const double w = 1.0 + s.xp * s.xp;
    const FlatCurvatures k = flat_curvatures(s.t, s.x, s.xp, xpp, 3);
    ++out.checked;
    const double m2 = xpp / (s.x * w * w);
    const double r2 = k.k_rot * k.k_rot / m2;
    out.worst_k2_ratio = std::max(out.worst_k2_ratio, r2);
    if (r2 > 1.0 + 1e-12) ++out.k2_violations;
    if (s.x > 1.0) {
      const double m1 = xpp * (a * std::sqrt(w) / (std::pow(s.x, 4) * w * w) + 1.0 / (s.x * w * w));
      const double r1 = k.k1 * k.k1 / m1;
      out.worst_k1_ratio = std::max(out.worst_k1_ratio, r1);
      if (r1 > 1.0 + 1e-12) ++out.k1_violations;
    }
  }
  return out;
}

}  // namespace fbmin::geometry
