#include <algorithm>
#include <array>
#include <cmath>

#include "fbmin/errors.hpp"
#include "fbmin/numerics.hpp"

namespace fbmin::numerics {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b_hat
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

using Vec = std::array<double, 2>;

struct Stepper {
  const SecondOrderRhs& rhs;

  Vec f(double t, const Vec& y) const { return {y[1], rhs(t, y[0], y[1])}; }

  // One step of size h from (t, y) with k1 = f(t, y). Returns the 5th-order
  // solution, the error vector and k7 = f(t + h, y_new).
  struct Result {
    Vec y;
    Vec err;
    Vec k7;
  };

  Result step(double t, const Vec& y, const Vec& k1, double h) const {
    auto comb = [&](std::initializer_list<std::pair<double, const Vec*>> terms) {
      Vec out = y;
      for (const auto& [coef, k] : terms) {
        out[0] += h * coef * (*k)[0];
        out[1] += h * coef * (*k)[1];
      }
      return out;
    };
    const Vec k2 = f(t + c2 * h, comb({{a21, &k1}}));
    const Vec k3 = f(t + c3 * h, comb({{a31, &k1}, {a32, &k2}}));
    const Vec k4 = f(t + c4 * h, comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec k5 = f(t + c5 * h, comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec k6 =
        f(t + h, comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec y_new = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec k7 = f(t + h, y_new);
    Vec err{};
    for (int i = 0; i < 2; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
    }
    return {y_new, err, k7};
  }
};

bool finite(const Vec& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const OdeSettings& s) {
  double norm = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double scale = s.abs_tol + s.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    norm = std::max(norm, std::abs(err[i]) / scale);
  }
  return norm;
}

double step_cap(const OdeSettings& s, double t) {
  double cap = s.max_step;
  if (s.max_step_fraction > 0.0) {
    cap = std::min(cap, s.max_step_fraction * std::max(1.0, std::abs(t)));
  }
  return cap;
}

}  // namespace

void OdeSettings::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("ODE tolerances must be positive");
  }
  if (max_steps < 1) throw DomainError("ODE max_steps must be at least 1");
  if (!(max_step > 0.0)) throw DomainError("ODE max_step must be positive");
  if (max_step_fraction < 0.0) throw DomainError("ODE max_step_fraction must be nonnegative");
}

std::string_view to_string(OdeStatus status) {
  switch (status) {
    case OdeStatus::reached_end: return "reached_end";
    case OdeStatus::stopped: return "stopped";
    case OdeStatus::event: return "event";
    case OdeStatus::max_steps: return "max_steps";
    case OdeStatus::step_underflow: return "step_underflow";
    case OdeStatus::nonfinite: return "nonfinite";
  }
  return "unknown";
}

Trajectory integrate_ode(const SecondOrderRhs& rhs, double t0, State y0, double t_end,
                         const OdeSettings& settings, const StopPredicate& stop,
                         const EventFunction& event) {
  settings.validate();
  const Stepper stepper{rhs};
  Vec y{y0.y, y0.yp};
  Vec k1 = stepper.f(t0, y);
  if (!finite(y) || !finite(k1)) {
    throw DomainError("ODE right-hand side is not finite at the initial point");
  }

  Trajectory out;
  out.samples.push_back({t0, y[0], y[1]});
  if (t_end == t0) return out;
  const double dir = t_end > t0 ? 1.0 : -1.0;

  double t = t0;
  double h = settings.initial_step;
  if (h <= 0.0) {
    // Hairer-Wanner starting step heuristic.
    const double sc0 = settings.abs_tol + settings.rel_tol * std::abs(y[0]);
    const double sc1 = settings.abs_tol + settings.rel_tol * std::abs(y[1]);
    const double d0 = std::max(std::abs(y[0]) / sc0, std::abs(y[1]) / sc1);
    const double d1 = std::max(std::abs(k1[0]) / sc0, std::abs(k1[1]) / sc1);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  h = std::min({h, step_cap(settings, t), std::abs(t_end - t0)});

  double g_prev = event ? event(out.samples.back()) : 0.0;
  double err_prev = 1e-4;
  int steps = 0;

  while (true) {
    if (steps >= settings.max_steps) {
      out.status = OdeStatus::max_steps;
      break;
    }
    h = std::min({h, step_cap(settings, t), std::abs(t_end - t)});
    if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      out.status = OdeStatus::step_underflow;
      break;
    }

    const auto trial = stepper.step(t, y, k1, dir * h);
    if (!finite(trial.y) || !finite(trial.k7)) {
      // Treat as a hard rejection; shrink until the step underflows.
      ++out.rejected_steps;
      h *= 0.25;
      continue;
    }
    const double err = error_norm(trial.err, y, trial.y, settings);
    if (err > 1.0) {
      ++out.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    // Accepted. PI step-size controller.
    const double t_prev = t;
    const Vec y_prev = y;
    const Vec k1_prev = k1;
    const bool last = std::abs(t_end - (t + dir * h)) <=
                      4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_end));
    t = last ? t_end : t + dir * h;
    y = trial.y;
    k1 = trial.k7;
    ++steps;
    out.last_step = h;

    const OdeSample sample{t, y[0], y[1]};
    if (event) {
      const double g = event(sample);
      if ((g_prev < 0.0 && g >= 0.0) || (g_prev > 0.0 && g <= 0.0)) {
        // Locate the root with single steps of reduced size from the previous point.
        const double h_acc = h;
        auto g_at = [&](double hh) {
          if (hh <= 0.0) return g_prev;
          const auto sub = stepper.step(t_prev, y_prev, k1_prev, dir * hh);
          return event({t_prev + dir * hh, sub.y[0], sub.y[1]});
        };
        double h_root = h_acc;
        if (g != 0.0) h_root = find_root(g_at, 0.0, h_acc);
        const auto sub = stepper.step(t_prev, y_prev, k1_prev, dir * h_root);
        out.samples.push_back({t_prev + dir * h_root, sub.y[0], sub.y[1]});
        out.status = OdeStatus::event;
        break;
      }
      g_prev = g;
    }
    out.samples.push_back(sample);
    if (last) {
      out.status = OdeStatus::reached_end;
      break;
    }
    if (stop && stop(sample)) {
      out.status = OdeStatus::stopped;
      break;
    }

    const double e = std::max(err, 1e-10);
    double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
    factor = std::clamp(factor, 0.2, 5.0);
    h *= factor;
    err_prev = std::max(err, 1e-4);
  }

  if (out.status == OdeStatus::step_underflow) {
    // Distinguish a right-hand side that stopped being finite.
    const Vec probe = stepper.f(t, y);
    if (!finite(probe)) out.status = OdeStatus::nonfinite;
  }
  out.last_step = h;
  return out;
}

}  // namespace fbmin::numerics
