#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "pitune/errors.hpp"
#include "pitune/parallel.hpp"
#include "pitune/response.hpp"
#include "pitune/roots.hpp"
#include "pitune/stability.hpp"
#include "pitune/steps.hpp"

namespace pitune {

//! Output-overshoot ceiling on the optimum (half of one percent reads as
//! "no visible overshoot" on a chart; the extra 5e-4 keeps the constraint
//! curve strictly inside the stability region).
inline constexpr double kTargetPoY = 0.0105;
//! Control-signal overshoot ceiling on the optimum.
inline constexpr double kTargetPoV = 0.1;

enum class CurveId { gamma_y, gamma_v };

/*! \brief One point on an overshoot-constraint curve in the (h, h_i) plane. */
struct CurvePoint {
  double h;
  double hi;
  PerformanceIndexes indexes;
  CurveId curve;
};

/*! \brief Why a constraint curve has no point at this h (if it doesn't). */
enum class TraceGap {
  none,
  no_stable_interval,  //!< h at/above the closure gain: no stable h_i > 0
  target_below_range,  //!< even the least integral action overshoots the target
  target_above_range,  //!< even the most aggressive stable h_i stays below it
};

struct TraceResult {
  std::optional<CurvePoint> point;
  TraceGap gap = TraceGap::none;
};

namespace detail {

inline double curve_metric(const PerformanceIndexes& idx, CurveId c) {
  return c == CurveId::gamma_y ? idx.po_y : idx.po_v;
}

inline double curve_target(CurveId c) {
  return c == CurveId::gamma_y ? kTargetPoY : kTargetPoV;
}

} // namespace detail

/*! \brief Solve for h_i on a constant-overshoot curve at fixed h ∈ (0, h_u).

  Overshoot grows with integral gain across the stable band, so the target
  level is bisected directly; should the band not be monotone at some h, a
  200-point rescan locates the first crossing instead.  The returned point's
  metric sits within 1e-5 of the target.
*/
[[nodiscard]] inline TraceResult trace_curve(double tp, CurveId curve, double h,
                                             StepMode mode = StepMode::integral_only) {
  const HiInterval band = hi_bounds(tp, h);
  if (band.empty) return {std::nullopt, TraceGap::no_stable_interval};
  const double target = detail::curve_target(curve);
  const auto metric = [&](double hi) {
    return detail::curve_metric(delay_indexes(tp, {h, hi}, mode), curve) - target;
  };
  const double width = band.hi - band.lo;
  const double lo = band.lo + 1e-7 * width;
  const double hi = band.hi - 1e-7 * width;
  if (metric(lo) > 0.0) return {std::nullopt, TraceGap::target_below_range};
  if (metric(hi) < 0.0) return {std::nullopt, TraceGap::target_above_range};
  double root = roots::bisect(metric, lo, hi, 1e-11);
  if (std::abs(metric(root)) >= 1e-5) {
    // Monotonicity must have broken; walk a fine grid for the first crossing.
    double prev = lo;
    double fprev = metric(prev);
    bool found = false;
    for (int k = 1; k <= 200; ++k) {
      const double z = lo + (hi - lo) * k / 200.0;
      const double fz = metric(z);
      if ((fz > 0.0) != (fprev > 0.0)) {
        root = roots::bisect(metric, prev, z, 1e-11);
        found = true;
        break;
      }
      prev = z;
      fprev = fz;
    }
    if (!found || std::abs(metric(root)) >= 1e-5)
      throw NumericalError("trace_curve: could not pin the overshoot level");
  }
  return {CurvePoint{h, root, delay_indexes(tp, {h, root}, mode), curve}, TraceGap::none};
}

/*! \brief The overshoot-constrained minimum-ISE tuning and its search trace. */
struct OptimumResult {
  CurvePoint point;        //!< the optimum (also appended to \p scan)
  CurveId active_curve;    //!< which overshoot constraint binds there
  std::vector<CurvePoint> scan; //!< feasible candidate per scanned h, ascending h
};

namespace detail {

//! Feasible candidate at one h: the lower of the two constraint curves
//! (raising h_i from there would break that constraint first), kept only if
//! both overshoot ceilings hold at it.
inline std::optional<CurvePoint> candidate_at(double tp, double h, StepMode mode) {
  const TraceResult ry = trace_curve(tp, CurveId::gamma_y, h, mode);
  const TraceResult rv = trace_curve(tp, CurveId::gamma_v, h, mode);
  std::optional<CurvePoint> pick;
  if (ry.point && rv.point)
    pick = ry.point->hi <= rv.point->hi ? ry.point : rv.point;
  else if (ry.point && rv.gap == TraceGap::target_above_range)
    pick = ry.point; // v never overshoots past its ceiling at this h
  else if (rv.point && ry.gap == TraceGap::target_above_range)
    pick = rv.point;
  if (!pick) return std::nullopt;
  constexpr double slack = 1e-4; // the traced metric itself is only 1e-5 tight
  if (pick->indexes.po_y > kTargetPoY + slack) return std::nullopt;
  if (pick->indexes.po_v > kTargetPoV + slack) return std::nullopt;
  return pick;
}

} // namespace detail

/*! \brief Minimize ISE over (h, h_i) subject to PO_y ≤ 0.0105 and PO_v ≤ 0.1.

  50 gains equally spaced over (0.02·h_u, 0.98·h_u) are scanned in parallel
  (each index writes only its own slot, so results are identical for any
  thread budget); the best slot — ties to the smaller h — seeds a golden-
  section refinement of h down to 1e-3·h_u.  Throws NumericalError if no
  scanned gain is feasible.
*/
[[nodiscard]] inline OptimumResult find_optimum(double tp,
                                                StepMode mode = StepMode::integral_only) {
  const double hu = ultimate_gain(tp).h_u;
  constexpr std::size_t kScan = 50;
  const auto h_at = [hu](double frac) { return hu * (0.02 + 0.96 * frac); };
  std::vector<std::optional<CurvePoint>> slots(kScan);
  parallel_for(kScan, [&](std::size_t k) {
    slots[k] = detail::candidate_at(tp, h_at(k / double(kScan - 1)), mode);
  });
  std::size_t best = kScan;
  std::vector<CurvePoint> scan;
  scan.reserve(kScan + 1);
  for (std::size_t k = 0; k < kScan; ++k) {
    if (!slots[k]) continue;
    scan.push_back(*slots[k]);
    if (best == kScan || slots[k]->indexes.ise < slots[best]->indexes.ise) best = k;
  }
  if (best == kScan)
    throw NumericalError("find_optimum: no feasible gain in the scan range");
  // Refine h between the best slot's neighbours; infeasible probes score +inf,
  // which drives golden section back into the feasible side.
  const double frac_best = best / double(kScan - 1);
  const double step = 1.0 / double(kScan - 1);
  const double lo = h_at(std::max(0.0, frac_best - step));
  const double hi = h_at(std::min(1.0, frac_best + step));
  std::optional<CurvePoint> refined = *slots[best];
  const auto cost = [&](double h) {
    const auto cand = detail::candidate_at(tp, h, mode);
    if (cand && (!refined || cand->indexes.ise < refined->indexes.ise)) refined = cand;
    return cand ? cand->indexes.ise : std::numeric_limits<double>::infinity();
  };
  roots::golden_min(cost, lo, hi, 1e-3 * hu);
  scan.push_back(*refined);
  return {*refined, refined->curve, std::move(scan)};
}

} // namespace pitune
