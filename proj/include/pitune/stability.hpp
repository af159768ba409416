#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "pitune/errors.hpp"
#include "pitune/model.hpp"
#include "pitune/roots.hpp"

namespace pitune {

/*! \brief Largest pure proportional gain h for which the delayed loop is stable.

  z_a is the first positive root of tan z = −(t_p/(1+t_p))·z, solved as
  sin z + c·z·cos z = 0 on (π/2, π] to stay clear of the tangent pole; the
  gain limit is h_u = −cos z_a + t_p·z_a·sin z_a.  At t_p = 0 the pair is
  exactly (π, 1).
*/
struct UltimateGain {
  double h_u;
  double z_a;
};

[[nodiscard]] inline UltimateGain ultimate_gain(double tp) {
  if (tp < 0.0) throw std::invalid_argument("ultimate_gain: t_p must be >= 0");
  if (tp == 0.0) return {1.0, std::numbers::pi};
  const double c = tp / (1.0 + tp);
  const auto f = [c](double z) { return std::sin(z) + c * z * std::cos(z); };
  const double za = roots::bisect(f, 0.5 * std::numbers::pi + 1e-9, std::numbers::pi, 1e-14);
  return {-std::cos(za) + tp * za * std::sin(za), za};
}

//! First positive root of tan z = −t_p·z (π exactly at t_p = 0).
[[nodiscard]] inline double ultimate_z(double tp) {
  if (tp < 0.0) throw std::invalid_argument("ultimate_z: t_p must be >= 0");
  if (tp == 0.0) return std::numbers::pi;
  const auto f = [tp](double z) { return std::sin(z) + tp * z * std::cos(z); };
  return roots::bisect(f, 0.5 * std::numbers::pi + 1e-9, std::numbers::pi, 1e-14);
}

// ---- stability boundary, parameterized by the crossover frequency z ---------
// Substituting s = iz into the closed-loop characteristic equation and
// splitting real/imaginary parts gives the boundary in the (h, h_i) plane:

[[nodiscard]] inline double boundary_h(double tp, double z) {
  return tp * z * std::sin(z) - std::cos(z);
}

[[nodiscard]] inline double boundary_hi(double tp, double z) {
  return z * std::sin(z) + tp * z * z * std::cos(z);
}

/*! \brief Gain at which the h_i > 0 part of the stability region closes.

  The region's upper boundary crosses h_i = 0 at z_u (where boundary_hi
  vanishes), so above h = boundary_h(z_u) = √(1 + t_p²·z_u²) no positive
  integral gain is stable, even though pure proportional control works up
  to the larger h_u.
*/
[[nodiscard]] inline double closure_gain(double tp) {
  const double zu = ultimate_z(tp);
  return std::sqrt(1.0 + tp * tp * zu * zu);
}

/*! \brief Stable h_i interval at fixed proportional gain h ∈ (0, h_u).

  The two crossover candidates z₁ < z₂ solve h + cos z − t_p·z·sin z = 0
  (i.e. h = boundary_h(z)); the stable band is
  (max(0, boundary_hi(z₂)), boundary_hi(z₁)).  For h at or above
  closure_gain the band in h_i > 0 is empty (flagged, not an error:
  callers tracing curves step over the gap).
*/
struct HiInterval {
  double lo;
  double hi;
  bool empty;
};

[[nodiscard]] inline HiInterval hi_bounds(double tp, double h) {
  const UltimateGain ug = ultimate_gain(tp);
  if (h <= 0.0 || h >= ug.h_u)
    throw std::domain_error("hi_bounds: h must lie strictly inside (0, h_u)");
  const auto f = [&](double z) { return h + std::cos(z) - tp * z * std::sin(z); };
  // The two roots straddle z_a (the argmax of boundary_h on its first arch),
  // where f(z_a) = h − h_u < 0 by the precondition — so each root can be
  // bracketed against z_a no matter how close they sit as h → h_u.
  const double z1 = roots::bisect(f, 1e-9, ug.z_a, 1e-14);
  double zr = ug.z_a;
  double step = 0.05;
  while (f(zr + step) < 0.0) {
    zr += step;
    if (zr > 4.0 * std::numbers::pi)
      throw NumericalError("hi_bounds: failed to bracket the upper boundary crossing");
  }
  const double z2 = roots::bisect(f, zr, zr + step, 1e-14);
  const double lo = std::max(0.0, boundary_hi(tp, z2));
  const double hi = boundary_hi(tp, z1);
  return {lo, hi, !(hi > lo)};
}

/*! \brief Open-loop frequency response (h_i + i·h·z)·e^{−iz} / (i·z·(1 + i·t_p·z)). */
[[nodiscard]] inline std::complex<double> open_loop_response(double tp, Gains g, double z) {
  if (z == 0.0)
    throw std::invalid_argument("open_loop_response: z = 0 sits on the integrator pole");
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> num = (g.hi + i * g.h * z) * std::exp(-i * z);
  const std::complex<double> den = i * z * (1.0 + i * tp * z);
  return num / den;
}

/*! \brief Phase margin of the delayed loop.

  The gain-crossover frequency z_b is the unique root of
  h² + h_i²/z² = 1 + t_p²·z² (left side strictly decreasing, right side
  strictly increasing), and the margin is π plus the open-loop phase there,
  wrapped into (−π, π].
*/
struct PhaseMarginResult {
  double z_b;
  double pm_deg;
};

[[nodiscard]] inline PhaseMarginResult phase_margin(double tp, Gains g) {
  if (g.h < 0.0 || g.hi <= 0.0)
    throw std::invalid_argument("phase_margin: needs h >= 0 and h_i > 0");
  const auto q = [&](double z) {
    return g.h * g.h + g.hi * g.hi / (z * z) - 1.0 - tp * tp * z * z;
  };
  double zlo = 1e-9;
  double zhi = 1.0;
  while (q(zhi) > 0.0) {
    zhi *= 2.0;
    if (zhi > 1e9) throw NumericalError("phase_margin: crossover bracket failed");
  }
  const double zb = roots::bisect(q, zlo, zhi, 1e-14);
  double pm = std::numbers::pi + std::arg(open_loop_response(tp, g, zb));
  if (pm > std::numbers::pi) pm -= 2.0 * std::numbers::pi;
  return {zb, pm * 180.0 / std::numbers::pi};
}

} // namespace pitune
