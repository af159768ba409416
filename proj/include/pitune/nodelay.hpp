#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "pitune/errors.hpp"
#include "pitune/model.hpp"
#include "pitune/oracle.hpp"
#include "pitune/roots.hpp"

namespace pitune::nodelay {

/*! \brief Raised when a closed form is asked for outside the underdamped regime. */
class RegimeNotSupported : public std::domain_error {
public:
  explicit RegimeNotSupported(const char* what) : std::domain_error(what) {}
};

enum class Regime { underdamped, critically_damped, overdamped };

/*! \brief Damping parameters of the delay-free loop.

  a = (1+h)/2 is the decay rate; b = (0.5/t_i)·√(4·h·t_i − t_i²(1+h)²) is the
  oscillation frequency, real exactly in the underdamped regime.  The regime
  boundary is t_i = 4h/(1+h)² (discriminant zero).
*/
struct DampedParams {
  double a;
  double b;            //!< 0 outside the underdamped regime
  Regime regime;
  double discriminant; //!< 4·h·t_i − t_i²(1+h)²
};

//! t_i value separating underdamped (below) from overdamped (above) at gain h.
[[nodiscard]] inline double damping_borderline_ti(double h) {
  return 4.0 * h / ((1.0 + h) * (1.0 + h));
}

[[nodiscard]] inline DampedParams damped_params(NoDelayGains g) {
  if (g.h <= -1.0) throw std::invalid_argument("damped_params: need h > -1 for stability");
  if (g.ti <= 0.0) throw std::invalid_argument("damped_params: t_i must be > 0");
  const double disc = 4.0 * g.h * g.ti - g.ti * g.ti * (1.0 + g.h) * (1.0 + g.h);
  const double a = 0.5 * (1.0 + g.h);
  constexpr double atol = 1e-12;
  if (disc > atol) return {a, 0.5 / g.ti * std::sqrt(disc), Regime::underdamped, disc};
  if (disc < -atol) return {a, 0.0, Regime::overdamped, disc};
  return {a, 0.0, Regime::critically_damped, disc};
}

namespace detail {
inline DampedParams require_underdamped(NoDelayGains g, const char* who) {
  const DampedParams p = damped_params(g);
  if (p.regime != Regime::underdamped) throw RegimeNotSupported(who);
  return p;
}
} // namespace detail

/*! \brief Controlled variable of the delay-free loop after a 0→1 setpoint step.

  y(t) = 1 + e^{−a·t}(−cos b·t − (a/b)·sin b·t); starts at 0 with zero slope
  (the setpoint enters through the integral term, so there is no step-instant
  kick) and settles to 1.
*/
[[nodiscard]] inline double step_y(NoDelayGains g, double t) {
  const auto [a, b, reg, disc] = detail::require_underdamped(g, "step_y: underdamped regime required");
  return 1.0 + std::exp(-a * t) * (-std::cos(b * t) - a / b * std::sin(b * t));
}

//! dy/dt = e^{−a·t}·((a²+b²)/b)·sin b·t.
[[nodiscard]] inline double step_y_deriv(NoDelayGains g, double t) {
  const auto [a, b, reg, disc] = detail::require_underdamped(g, "step_y_deriv: underdamped regime required");
  return std::exp(-a * t) * (a * a + b * b) / b * std::sin(b * t);
}

/*! \brief Gain-scaled controller output v(t) = y(t) + dy/dt (plant inversion). */
[[nodiscard]] inline double step_v(NoDelayGains g, double t) {
  const auto [a, b, reg, disc] = detail::require_underdamped(g, "step_v: underdamped regime required");
  return 1.0 + std::exp(-a * t) *
                   (-std::cos(b * t) + (-a + a * a + b * b) / b * std::sin(b * t));
}

//! dv/dt = e^{−a·t}·(a²+b²)·(cos b·t − ((a−1)/b)·sin b·t).
[[nodiscard]] inline double step_v_deriv(NoDelayGains g, double t) {
  const auto [a, b, reg, disc] = detail::require_underdamped(g, "step_v_deriv: underdamped regime required");
  return std::exp(-a * t) * (a * a + b * b) *
         (std::cos(b * t) - (a - 1.0) / b * std::sin(b * t));
}

/*! \brief Fractional overshoot of y: first peak above the setpoint.

  The first zero of dy/dt is at b·t = π, giving PO_y = e^{−π·a/b}.
  Returns 0 outside the underdamped regime (no overshoot).
*/
[[nodiscard]] inline double overshoot_y(NoDelayGains g) {
  const DampedParams p = damped_params(g);
  if (p.regime != Regime::underdamped) return 0.0;
  return std::exp(-std::numbers::pi * p.a / p.b);
}

/*! \brief Fractional overshoot of v above its settling value.

  The first zero of dv/dt solves tan(b·t) = b/(a−1); the branch must be the
  first positive root, i.e. θ = atan2(b, a−1) ∈ (0, π) (θ > π/2 when a < 1,
  exactly π/2 at a = 1).  Substituting back gives
  PO_v = √((a−1)² + b²)·e^{−(a/b)·θ}.  Returns 0 outside the underdamped
  regime.
*/
[[nodiscard]] inline double overshoot_v(NoDelayGains g) {
  const DampedParams p = damped_params(g);
  if (p.regime != Regime::underdamped) return 0.0;
  const double theta = std::atan2(p.b, p.a - 1.0);
  return std::hypot(p.a - 1.0, p.b) * std::exp(-p.a / p.b * theta);
}

//! Overshoot of v at given damping parameters (used by curve tracing).
[[nodiscard]] inline double overshoot_v_ab(double a, double b) {
  const double theta = std::atan2(b, a - 1.0);
  return std::hypot(a - 1.0, b) * std::exp(-a / b * theta);
}

/*! \brief ∫₀^∞ (y−1)² dt.

  Underdamped closed form (0.25/a)·(5a²+b²)/(a²+b²); other regimes fall back
  to quadrature of the numerically integrated response (the caller can tell
  which path was taken from damped_params(g).regime).
*/
[[nodiscard]] inline double ise_closed_form(NoDelayGains g) {
  const DampedParams p = damped_params(g);
  if (p.regime == Regime::underdamped)
    return 0.25 / p.a * (5.0 * p.a * p.a + p.b * p.b) / (p.a * p.a + p.b * p.b);
  // Overdamped/critical: integrate (y−1)² over [0, 60/a] (the envelope decays
  // like e^{−a·t}, so the tail beyond is far below the 1e-6 contract).
  const double horizon = std::ceil(60.0 / p.a / 0.01) * 0.01;
  const SampledResponse r = simulate_nodelay(g, {1e-3, horizon});
  double sum = 0.0;
  for (std::size_t k = 0; k < r.y.size(); ++k) {
    const double e = r.y[k] - 1.0;
    const double w = (k == 0 || k + 1 == r.y.size()) ? 0.5 : 1.0;
    sum += w * e * e;
  }
  return 0.01 * sum;
}

/*! \brief Index triple for the delay-free loop (closed forms where they exist). */
struct NoDelayIndexes {
  double po_y;
  double po_v;
  double ise;
  Regime regime;
};

[[nodiscard]] inline NoDelayIndexes indexes(NoDelayGains g) {
  const DampedParams p = damped_params(g);
  return {overshoot_y(g), overshoot_v(g), ise_closed_form(g), p.regime};
}

// ---- chart-curve inversions at fixed h --------------------------------------
// With a = (1+h)/2 fixed, t_i maps one-to-one onto b through
// b² = h/t_i − a², i.e. t_i = h/(a² + b²); smaller t_i means larger b and
// larger overshoots, which is what makes the bisections below monotone.

//! t_i on the constant-PO_y curve at gain h (exists for any target in (0,1)).
[[nodiscard]] inline double ti_for_po_y(double h, double target) {
  if (h <= 0.0) throw std::invalid_argument("ti_for_po_y: h must be > 0");
  if (target <= 0.0 || target >= 1.0)
    throw std::invalid_argument("ti_for_po_y: target must be in (0,1)");
  const double a = 0.5 * (1.0 + h);
  const double b = std::numbers::pi * a / std::log(1.0 / target);
  return h / (a * a + b * b);
}

//! t_i on the constant-PO_v curve at gain h, or nothing if the target is
//! unreachable there (PO_v has a positive floor (a−1)e^{−a/(a−1)} for a > 1).
[[nodiscard]] inline std::optional<double> ti_for_po_v(double h, double target) {
  if (h <= 0.0) throw std::invalid_argument("ti_for_po_v: h must be > 0");
  if (target <= 0.0) throw std::invalid_argument("ti_for_po_v: target must be > 0");
  const double a = 0.5 * (1.0 + h);
  if (a > 1.0 && (a - 1.0) * std::exp(-a / (a - 1.0)) >= target) return std::nullopt;
  const auto f = [&](double b) { return overshoot_v_ab(a, b) - target; };
  double blo = 1e-9, bhi = 1.0;
  while (f(bhi) < 0.0) {
    bhi *= 2.0;
    if (bhi > 1e9) throw NumericalError("ti_for_po_v: bracket growth failed");
  }
  if (f(blo) > 0.0) return std::nullopt; // floor above target even at b→0
  const double b = roots::bisect(f, blo, bhi, 1e-13);
  return h / (a * a + b * b);
}

//! t_i on the constant-ISE contour at gain h, or nothing where the level does
//! not intersect the vertical line (needs level·a in (0.25, 1.25)).
[[nodiscard]] inline std::optional<double> ti_for_ise(double h, double level) {
  if (h <= 0.0) throw std::invalid_argument("ti_for_ise: h must be > 0");
  const double a = 0.5 * (1.0 + h);
  const double ca = level * a;
  if (ca <= 0.25 || ca >= 1.25) return std::nullopt;
  const double b2 = a * a * (1.25 - ca) / (ca - 0.25);
  if (b2 <= 0.0) return std::nullopt;
  return h / (a * a + b2);
}

/*! \brief The delay-free optimum tuning point: PO_y = 0.0105 with PO_v = 0.1.

  Along the constant-PO_y curve, b/a = π/ln(1/PO_y) is fixed, so the
  two-constraint intersection reduces to a single root in a, bracketed by a
  scan and polished by bisection (both residuals end below 1e-8).
*/
[[nodiscard]] inline NoDelayGains optimum(double po_y_target = 0.0105,
                                          double po_v_target = 0.1) {
  const double ratio = std::numbers::pi / std::log(1.0 / po_y_target);
  const auto f = [&](double a) { return overshoot_v_ab(a, ratio * a) - po_v_target; };
  const auto brackets = roots::scan_brackets(f, 0.5001, 40.0, 0.01, 1);
  if (brackets.empty())
    throw NumericalError("nodelay optimum: no intersection of the overshoot constraints");
  const double a = roots::bisect(f, brackets[0].lo, brackets[0].hi, 1e-14);
  const double b = ratio * a;
  return {2.0 * a - 1.0, (2.0 * a - 1.0) / (a * a + b * b)};
}

} // namespace pitune::nodelay
