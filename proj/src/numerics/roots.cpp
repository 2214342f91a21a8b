#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>

#include "fbmin/errors.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::numerics {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 int max_iterations) {
  const double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw DomainError("find_root: interval does not bracket a sign change");
  }
  std::uintmax_t iterations = static_cast<std::uintmax_t>(std::max(1, max_iterations));
  const boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iterations);
  return 0.5 * (a + b);
}

HermiteValue hermite_quintic(double t0, double t1, const HermiteValue& at0,
                             const HermiteValue& at1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;

  // Basis functions on [0, 1] and their derivatives in s.
  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
  const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h3 = 0.5 * s3 - s4 + 0.5 * s5;

  const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double d2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
  const double d5 = 30 * s2 - 60 * s3 + 30 * s4;
  const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double d3 = 1.5 * s2 - 4 * s3 + 2.5 * s4;

  const double dd0 = -60 * s + 180 * s2 - 120 * s3;
  const double dd1 = -36 * s + 96 * s2 - 60 * s3;
  const double dd2 = 1 - 9 * s + 18 * s2 - 10 * s3;
  const double dd5 = 60 * s - 180 * s2 + 120 * s3;
  const double dd4 = -24 * s + 84 * s2 - 60 * s3;
  const double dd3 = 3 * s - 12 * s2 + 10 * s3;

  const double y0 = at0.y, p0 = at0.yp * h, q0 = at0.ypp * h * h;
  const double y1 = at1.y, p1 = at1.yp * h, q1 = at1.ypp * h * h;

  HermiteValue out;
  out.y = h0 * y0 + h1 * p0 + h2 * q0 + h5 * y1 + h4 * p1 + h3 * q1;
  out.yp = (d0 * y0 + d1 * p0 + d2 * q0 + d5 * y1 + d4 * p1 + d3 * q1) / h;
  out.ypp = (dd0 * y0 + dd1 * p0 + dd2 * q0 + dd5 * y1 + dd4 * p1 + dd3 * q1) / (h * h);
  return out;
}

}  // namespace fbmin::numerics
