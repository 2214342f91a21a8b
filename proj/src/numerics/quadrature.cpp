#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "fbmin/errors.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::numerics {

namespace {

// Gauss-Kronrod 7/15 abscissae (nonnegative half) and weights.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

class Evaluator {
 public:
  explicit Evaluator(const Integrand& f) : f_(f) {}

  double operator()(double x) {
    ++count;
    const double v = f_(x);
    if (!std::isfinite(v)) {
      throw NumericalError("integrand is not finite at x = " + std::to_string(x));
    }
    return v;
  }

  int count = 0;

 private:
  const Integrand& f_;
};

Panel gk15(Evaluator& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * wgk[7];
  double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const double s = f(center - dx) + f(center + dx);
    kronrod += wgk[j] * s;
    if (j % 2 == 1) gauss += wg[j / 2] * s;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

// Adaptive integration of g over [a, b] without substitution.
QuadResult adaptive_plain(Evaluator& g, double a, double b, const QuadSettings& s) {
  std::priority_queue<Panel> heap;
  Panel first = gk15(g, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  int intervals = 1;
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon();
  while (error > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
    if (intervals >= s.max_intervals) {
      throw NumericalError("adaptive quadrature exceeded its interval budget on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b ||
        worst.error <= roundoff * std::abs(worst.value)) {
      break;  // the worst panel is resolved to roundoff
    }
    heap.pop();
    const Panel left = gk15(g, worst.a, mid);
    const Panel right = gk15(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to limit accumulated cancellation.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  QuadResult out;
  out.value = total;
  out.error_estimate = error;
  out.evaluations = g.count;
  return out;
}

}  // namespace

QuadResult quad_adaptive(const Integrand& f, double a, double b, const QuadSettings& settings) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("quad_adaptive needs finite limits");
  }
  if (a == b) return {};
  // x = a + (b - a) (3w^2 - 2w^3), dx = 6 (b - a) w (1 - w) dw.
  const double len = b - a;
  const Integrand smoothed = [&](double w) {
    const double x = a + len * w * w * (3.0 - 2.0 * w);
    return f(x) * 6.0 * len * w * (1.0 - w);
  };
  Evaluator g(smoothed);
  return adaptive_plain(g, 0.0, 1.0, settings);
}

QuadResult quad_improper(const Integrand& f, double a, double upper,
                         const QuadSettings& settings) {
  if (!std::isfinite(a)) throw DomainError("quad_improper needs a finite lower limit");
  if (std::isfinite(upper)) {
    if (upper < a) throw DomainError("quad_improper needs upper >= a");
    return quad_adaptive(f, a, upper, settings);
  }
  if (upper < 0.0) throw DomainError("quad_improper supports only +infinity as infinite limit");

  QuadResult out;
  // Panels: [a, b1], then decades [b, 10 b].
  double lo = a;
  double hi = a > 0.0 ? 10.0 * a : std::max(1.0, a + 1.0);
  double sum = 0.0;
  double panel_error = 0.0;
  double previous_total = std::numeric_limits<double>::quiet_NaN();
  double f_prev_end = std::numeric_limits<double>::quiet_NaN();
  int slow_decades = 0;
  int evaluations = 0;

  for (int decade = 0; decade < settings.max_decades; ++decade) {
    QuadSettings panel_settings = settings;
    panel_settings.abs_tol = settings.abs_tol / 4.0;
    const QuadResult panel = quad_adaptive(f, lo, hi, panel_settings);
    sum += panel.value;
    panel_error += panel.error_estimate;
    evaluations += panel.evaluations;

    const double f_end = f(hi);
    ++evaluations;
    if (!std::isfinite(f_end)) {
      throw NumericalError("integrand is not finite at x = " + std::to_string(hi));
    }

    double tail = std::numeric_limits<double>::quiet_NaN();
    if (f_end == 0.0 && f_prev_end == 0.0) {
      tail = 0.0;
      out.tail_power = std::numeric_limits<double>::infinity();
    } else if (std::isfinite(f_prev_end) && f_prev_end != 0.0 && f_end != 0.0 &&
               (f_end > 0.0) == (f_prev_end > 0.0) && lo > 0.0) {
      const double p = -std::log(std::abs(f_end / f_prev_end)) / std::log(hi / lo);
      out.tail_power = p;
      if (p <= 1.0 + settings.divergence_margin) {
        ++slow_decades;
      } else {
        slow_decades = 0;
        tail = f_end * hi / (p - 1.0);
      }
    }

    if (slow_decades >= 3) {
      out.divergent = true;
      out.value = sum >= 0.0 ? std::numeric_limits<double>::infinity()
                             : -std::numeric_limits<double>::infinity();
      out.error_estimate = std::numeric_limits<double>::infinity();
      out.evaluations = evaluations;
      return out;
    }

    if (std::isfinite(tail)) {
      const double total = sum + tail;
      if (std::isfinite(previous_total)) {
        const double change = std::abs(total - previous_total);
        if (change <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total))) {
          out.value = total;
          out.error_estimate = change + panel_error;
          out.evaluations = evaluations;
          return out;
        }
      }
      previous_total = total;
    } else {
      previous_total = std::numeric_limits<double>::quiet_NaN();
    }

    f_prev_end = f_end;
    lo = hi;
    hi = 10.0 * hi;
  }
  throw NumericalError("improper quadrature did not converge within " +
                       std::to_string(settings.max_decades) + " decades");
}

}  // namespace fbmin::numerics
