#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pitune {

/*! \brief How the setpoint step enters the PI law.

  integral_only: the reference acts through the integral term only; the
  proportional term works on the measurement.  The controller output is
  continuous at the step instant (no proportional kick), which is what makes
  the "overshoot of the controller output" a meaningful, bounded quantity for
  tuning, and it is the reading under which the optimum-tuning tables and
  charts of this library are produced.

  full_error: the proportional term acts on the full error, so the step
  instant kicks the controller output by −h and the response picks up a
  derivative jump one delay later.  Provided for comparison; both modes share
  the same loop dynamics away from the step instant.
*/
enum class StepMode { integral_only, full_error };

/*! \brief Closed-loop samples on the fixed 0.01 grid.

  For the delay loop the time axis is referred to the delay L and the grid
  spans [0, horizon] inclusive (701 points for the default 7-delay horizon);
  y[0] = 1 because the loop starts from the pre-step steady state.
*/
struct SampledResponse {
  std::vector<double> t;
  std::vector<double> y;
  std::vector<double> v; //!< controller output scaled by the plant gain
};

/*! \brief The index triple used by the tuning optimizer. */
struct PerformanceIndexes {
  double po_y; //!< opposite of the most negative y sample (0 if none)
  double po_v; //!< opposite of the most negative v sample (0 if none)
  double ise;  //!< trapezoidal integral of y² over the first 7 time units
};

/*! \brief Grid-based index evaluation (trapezoid rule, step 0.01, span [0,7]).

  The trapezoid sum is written as endpoint corrections plus a plain sum so
  that the result is bit-reproducible:
  ISE = 0.005·y₀² − 0.005·y₇₀₀² + 0.01·Σ_{k=1..700} y_k².
  Overshoots are the opposites of the grid minima of y and v, clamped at 0.
*/
[[nodiscard]] inline PerformanceIndexes indexes_from_samples(const SampledResponse& r) {
  constexpr std::size_t n = 701; // 0.00 .. 7.00
  if (r.y.size() < n || r.v.size() < n)
    throw std::invalid_argument("indexes_from_samples: need samples up to t = 7");
  double sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) sum += r.y[k] * r.y[k];
  const double ise = 0.005 * r.y[0] * r.y[0] - 0.005 * r.y[n - 1] * r.y[n - 1] + 0.01 * sum;
  const double ymin = *std::min_element(r.y.begin(), r.y.begin() + n);
  const double vmin = *std::min_element(r.v.begin(), r.v.begin() + n);
  return {std::max(0.0, -ymin), std::max(0.0, -vmin), ise};
}

} // namespace pitune
