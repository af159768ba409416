#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pitune/model.hpp"
#include "pitune/response.hpp"

namespace pitune {

/*! \brief Configuration of the brute-force loop integrator. */
struct OracleConfig {
  double step = 1e-4;   //!< integration step; must divide 0.01 exactly
  double horizon = 7.0; //!< simulated span in delay units
};

namespace detail {

//! round-half-away helper for step/grid ratios
inline std::int64_t exact_ratio(double num, double den, const char* what) {
  const double q = num / den;
  const auto n = static_cast<std::int64_t>(std::llround(q));
  if (n < 1 || std::abs(n * den - num) > 1e-9 * num)
    throw std::invalid_argument(std::string("oracle: ") + what);
  return n;
}

} // namespace detail

/*! \brief Fixed-step RK4 integration of the delayed closed loop.

  Integrates the plant state t_p·y′(t) + y(t) = v(t−1) together with the
  error integral, with the controller output v computed algebraically from
  the current state; the setpoint steps 1→0 at t = 0 and the loop starts in
  steady state (y ≡ 1, v ≡ 1 on [−1, 0]).  This state form never
  differentiates the setpoint, so it is independent of any jump-condition
  choices made by the piecewise-analytical solver it cross-checks.

  The stored v history keeps exact node derivatives (v′ = −h·y′ − h_i·y) and
  stage lookups use cubic Hermite interpolation between nodes, so the
  integrator keeps fourth-order accuracy even though stages fall between
  history nodes.  Steps are aligned with the delay knots (step divides 0.01,
  0.01 divides 1), which keeps every unit interval internally smooth.
*/
[[nodiscard]] inline SampledResponse simulate_loop(double tp, Gains g,
                                                   OracleConfig cfg = {},
                                                   StepMode mode = StepMode::integral_only) {
  if (tp <= 0.0) throw std::invalid_argument("simulate_loop: tp must be > 0");
  if (cfg.step <= 0.0 || cfg.horizon <= 0.0)
    throw std::invalid_argument("simulate_loop: invalid config");
  const std::int64_t n_sub = detail::exact_ratio(0.01, cfg.step, "step must divide 0.01");
  const std::int64_t n_per = n_sub * 100; // steps per delay unit
  const std::int64_t n_grid = detail::exact_ratio(cfg.horizon, 0.01, "horizon must be a grid multiple");
  const std::int64_t n = n_grid * n_sub;

  const double dt = cfg.step;
  const double h = g.h, hi = g.hi;
  // Setpoint channel: with the proportional term on the measurement the PI
  // law around the pre-step steady state reads v = (1+h) − h·y − h_i·∫y,
  // continuous at t = 0; with it on the full error the bias drops to 1 and
  // v(0⁺) = 1 − h.
  const double bias = (mode == StepMode::integral_only) ? 1.0 + h : 1.0;

  std::vector<double> y(n + 1), Y(n + 1), v(n + 1), vp(n + 1);
  y[0] = 1.0;
  Y[0] = 0.0;
  v[0] = bias - h;         // = 1 in integral_only mode
  vp[0] = -hi;             // right derivative: y′(0⁺) = 0, y(0) = 1

  // v′ from the left at the t = 1 node (needed by Hermite intervals ending
  // there); differs from the stored right value only in full_error mode.
  const double vp_left_at_delay = -hi;

  // History lookup at node-unit time τ (τ = t−1 in units of dt).
  // end_of_step marks the stage at the right end of an integration step, so
  // a lookup landing exactly on the v discontinuity at t = 0 takes the left
  // (pre-step) limit instead of the post-step value.
  const auto drive = [&](double tau, bool end_of_step) -> double {
    if (tau < 0.0) return 1.0;
    const double fl = std::floor(tau);
    const auto j = static_cast<std::int64_t>(fl);
    const double u = tau - fl;
    if (u == 0.0) return (end_of_step && j == 0) ? 1.0 : v[j];
    const double v0 = v[j], v1 = v[j + 1];
    const double d0 = dt * vp[j];
    const double d1 = dt * ((j + 1 == n_per) ? vp_left_at_delay : vp[j + 1]);
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * v0 + (u3 - 2 * u2 + u) * d0 +
           (-2 * u3 + 3 * u2) * v1 + (u3 - u2) * d1;
  };

  for (std::int64_t k = 0; k < n; ++k) {
    const double tau0 = static_cast<double>(k - n_per);
    const auto f = [&](double yy, double tau, bool end) { return (drive(tau, end) - yy) / tp; };
    const double k1y = f(y[k], tau0, false);
    const double k1Y = y[k];
    const double k2y = f(y[k] + 0.5 * dt * k1y, tau0 + 0.5, false);
    const double k2Y = y[k] + 0.5 * dt * k1y;
    const double k3y = f(y[k] + 0.5 * dt * k2y, tau0 + 0.5, false);
    const double k3Y = y[k] + 0.5 * dt * k2y;
    const double k4y = f(y[k] + dt * k3y, tau0 + 1.0, true);
    const double k4Y = y[k] + dt * k3y;
    y[k + 1] = y[k] + dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    Y[k + 1] = Y[k] + dt / 6.0 * (k1Y + 2 * k2Y + 2 * k3Y + k4Y);
    v[k + 1] = bias - h * y[k + 1] - hi * Y[k + 1];
    const double yp = (drive(static_cast<double>(k + 1 - n_per), false) - y[k + 1]) / tp;
    vp[k + 1] = -h * yp - hi * y[k + 1];
  }

  SampledResponse out;
  out.t.resize(n_grid + 1);
  out.y.resize(n_grid + 1);
  out.v.resize(n_grid + 1);
  for (std::int64_t m = 0; m <= n_grid; ++m) {
    out.t[m] = 0.01 * static_cast<double>(m);
    out.y[m] = y[m * n_sub];
    out.v[m] = v[m * n_sub];
  }
  return out;
}

/*! \brief RK4 integration of the delay-free closed loop.

  Solves t_i·y″ + t_i(1+h)·y′ + h·y = h from rest (setpoint step 0→1) and
  reports v = y + y′ alongside y, sampled on the 0.01 grid.  Used as ground
  truth for the closed-form step response and its indexes.
*/
[[nodiscard]] inline SampledResponse simulate_nodelay(NoDelayGains g,
                                                      OracleConfig cfg = {1e-4, 20.0}) {
  if (g.ti <= 0.0) throw std::invalid_argument("simulate_nodelay: t_i must be > 0");
  if (cfg.step <= 0.0 || cfg.horizon <= 0.0)
    throw std::invalid_argument("simulate_nodelay: invalid config");
  const std::int64_t n_sub = detail::exact_ratio(0.01, cfg.step, "step must divide 0.01");
  const std::int64_t n_grid = detail::exact_ratio(cfg.horizon, 0.01, "horizon must be a grid multiple");
  const std::int64_t n = n_grid * n_sub;

  const double dt = cfg.step;
  const double h = g.h, ti = g.ti;
  double yy = 0.0, w = 0.0; // y and y′
  const auto acc = [&](double yv, double wv) { return h * (1.0 - yv) / ti - (1.0 + h) * wv; };

  SampledResponse out;
  out.t.resize(n_grid + 1);
  out.y.resize(n_grid + 1);
  out.v.resize(n_grid + 1);
  out.t[0] = 0.0;
  out.y[0] = 0.0;
  out.v[0] = 0.0;
  std::int64_t m = 1;
  for (std::int64_t k = 0; k < n; ++k) {
    const double k1y = w, k1w = acc(yy, w);
    const double k2y = w + 0.5 * dt * k1w, k2w = acc(yy + 0.5 * dt * k1y, w + 0.5 * dt * k1w);
    const double k3y = w + 0.5 * dt * k2w, k3w = acc(yy + 0.5 * dt * k2y, w + 0.5 * dt * k2w);
    const double k4y = w + dt * k3w, k4w = acc(yy + dt * k3y, w + dt * k3w);
    yy += dt / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    w += dt / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    if ((k + 1) % n_sub == 0) {
      out.t[m] = 0.01 * static_cast<double>(m);
      out.y[m] = yy;
      out.v[m] = yy + w;
      ++m;
    }
  }
  return out;
}

} // namespace pitune
