#pragma once

// Curvature of hypersurfaces of revolution X(t, theta) = (x(t) theta, t),
// theta in S^{n-2}, for the flat metric and for g = e^{2h} <,>.
//
// Orientation: the profile is traversed with x increasing and the unit
// normal is N = (-sin phi, cos phi) in the (x, t) half-plane, where
// (cos phi, sin phi) is the unit tangent.

#include <string>
#include <vector>

#include "fbmin/metrics.hpp"
#include "fbmin/profile.hpp"

namespace fbmin::geometry {

using metrics::ConformalMetric;

struct FlatCurvatures {
  double k1;     // profile direction
  double k_rot;  // rotational directions, multiplicity n - 2
};

/// k1 = -x''/(1+x'^2)^{3/2}, k_rot = 1/(x sqrt(1+x'^2)).
FlatCurvatures flat_curvatures(double t, double x, double xp, double xpp, int n);

/// <X, N> = (x' t - x)/sqrt(1 + x'^2).
double support_function(double t, double x, double xp);

/// Pointwise geometry in parametrization-free form.
struct CurvePoint {
  double x;
  double t;
  double cos_phi;
  double sin_phi;
  /// d phi / ds. Equals the flat principal curvature k1.
  double k1;
  /// Flat arclength per unit of the underlying parameter.
  double ds;
};

CurvePoint from_graph(double t, double x, double xp, double xpp);
CurvePoint from_radial(double x, double t, double tp, double tpp);

struct CurvatureSample {
  double t;
  double x;
  double k1;
  double k_rot;
  double support;
  /// n - 1 conformal principal curvatures: kbar_1, then n - 2 copies of kbar_rot.
  std::vector<double> kbar;
  double H;
  double Hbar;
};

/// kbar_i = e^{-h}(k_i - 2 u'(|X|^2) <X, N>), Hbar = sum of kbar_i.
CurvatureSample conformal_curvatures(const ConformalMetric& metric, const CurvePoint& p);

/// Samples along the graph part (x'' from the ODE) and then the radial part.
std::vector<CurvatureSample> curvature_profile(const ConformalMetric& metric,
                                               const profile::ProfileCurve& curve);

struct Partial {
  /// Cutoff radius |X|.
  double cutoff;
  /// Cumulative integral over the part of the curve with |X| <= cutoff.
  double value;
};

struct CurvatureReport {
  /// Flat integral of (|A|^2 - H^2/2) dv, which for n = 3 is (k1 - k2)^2/2 dv.
  double flat_total = 0.0;
  /// Integral of |A_g|^2 dv_g using the conformal curvatures.
  double conf_total = 0.0;
  /// flat_total and conf_total on decades of |X|, ending with the full curve.
  /// Empty when the curve covers less than one decade.
  std::vector<Partial> partials;
  std::vector<Partial> conf_partials;
  /// Geometric-series estimate of the flat part beyond the last cutoff; +inf
  /// when the last decades do not shrink.
  double tail_estimate = 0.0;
  /// Both integrals gain less than the convergence fraction over the last decade.
  bool converged = false;
  /// Cumulative integrals at every input point (same order).
  std::vector<double> cumulative;
  std::vector<double> conf_cumulative;
};

/// A point with the data needed for interpolation along one parametrization.
struct ParamPoint {
  double param;
  double a;     // x for graphs over t, t for graphs over x
  double ap;
  double app;
};

enum class Parametrization { graph_over_t, graph_over_x };

/// Piece of a curve in one parametrization, param strictly monotone.
struct Segment {
  Parametrization kind;
  std::vector<ParamPoint> points;
};

/// Total curvature of a chain of segments in an n = 3 conformal metric. The
/// state is interpolated by quintic Hermite polynomials and integrated with
/// 8-point Gauss-Legendre per interval. Partials are taken at decades of the
/// running maximum of |X|; a curve covering less than one decade gets totals
/// only, with converged = false.
CurvatureReport total_curvature_segments(const ConformalMetric& metric,
                                         const std::vector<Segment>& segments,
                                         double convergence_fraction = 1e-4);

/// Total curvature of a solved profile (n = 3).
CurvatureReport total_curvature(const ConformalMetric& metric, const profile::ProfileCurve& curve,
                                double convergence_fraction = 1e-4);

/// The points of the graph part up to the switch followed by the radial
/// part, in the order of CurvatureReport::cumulative.
std::vector<CurvePoint> curve_points(const ConformalMetric& metric,
                                     const profile::ProfileCurve& curve);

/// Pointwise |A_g|^2 along the curve, for any n.
std::vector<double> conformal_norm_squared(const ConformalMetric& metric,
                                           const profile::ProfileCurve& curve);

struct MajorantCheck {
  int checked = 0;
  int k1_violations = 0;
  int k2_violations = 0;
  /// Largest k1^2 / majorant and k2^2 / majorant seen.
  double worst_k1_ratio = 0.0;
  double worst_k2_ratio = 0.0;
};

/// Samplewise comparison of k1^2 and k2^2 with the majorants
///   x'' [a sqrt(1+x'^2)/(x^4 (1+x'^2)^2) + 1/(x (1+x'^2)^2)]   (samples with x > 1)
///   x'' / (x (1+x'^2)^2)
/// along the graph part of an n = 3 profile.
MajorantCheck check_majorants(const ConformalMetric& metric, const profile::ProfileCurve& curve,
                              double a);

}  // namespace fbmin::geometry
