#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pitune/model.hpp"
#include "pitune/nodelay.hpp"
#include "pitune/optimize.hpp"
#include "pitune/parallel.hpp"
#include "pitune/roots.hpp"
#include "pitune/rules.hpp"
#include "pitune/stability.hpp"

namespace pitune {

struct Polyline {
  std::string name;
  std::vector<std::array<double, 2>> pts; //!< (x, y) in plot order
};

struct NamedPoint {
  std::string name;
  double x, y;
};

/*! \brief A tuning-plane chart: named curves plus named tuning points. */
struct ChartBundle {
  std::optional<double> tp; //!< empty for the delay-free chart
  std::string x_label;
  std::string y_label;
  std::vector<Polyline> curves;
  std::vector<NamedPoint> points;
};

inline constexpr std::size_t kChartSamples = 200;

/*! \brief Design chart for the delay-free loop in the (h, t_i) plane.

  Curves: the damping borderline, the PO_v = 0.1 locus (gamma_v),
  constant-PO_y loci at 0.001 / 0.0105 / 0.02 (gamma_y_1..3) and constant-ISE
  contours at 1.0 / 1.2 / 1.4 (gamma_i_1..3).  Point B marks the
  PO_y = 0.0105 ∩ PO_v = 0.1 optimum.  h runs over [0.05, 5.025] in steps of
  0.025 so that round gains like h = 1 land exactly on a sample.
*/
[[nodiscard]] inline ChartBundle nodelay_chart() {
  ChartBundle out;
  out.x_label = "h";
  out.y_label = "ti";
  const auto h_at = [](std::size_t k) { return 0.05 + 0.025 * double(k); };

  const auto add_curve = [&](const std::string& name, auto&& ti_of_h) {
    Polyline pl{name, {}};
    for (std::size_t k = 0; k < kChartSamples; ++k) {
      const double h = h_at(k);
      if (const std::optional<double> ti = ti_of_h(h)) pl.pts.push_back({h, *ti});
    }
    out.curves.push_back(std::move(pl));
  };

  add_curve("damping_borderline", [](double h) -> std::optional<double> {
    return nodelay::damping_borderline_ti(h);
  });
  add_curve("gamma_v", [](double h) { return nodelay::ti_for_po_v(h, kTargetPoV); });
  const double po_y_levels[3] = {0.001, kTargetPoY, 0.02};
  for (int j = 0; j < 3; ++j)
    add_curve("gamma_y_" + std::to_string(j + 1),
              [&, j](double h) -> std::optional<double> {
                return nodelay::ti_for_po_y(h, po_y_levels[j]);
              });
  const double ise_levels[3] = {1.0, 1.2, 1.4};
  for (int j = 0; j < 3; ++j)
    add_curve("gamma_i_" + std::to_string(j + 1),
              [&, j](double h) { return nodelay::ti_for_ise(h, ise_levels[j]); });

  const NoDelayGains b = nodelay::optimum();
  out.points.push_back({"B", b.h, b.ti});
  return out;
}

/*! \brief The stability boundary restricted to the chart quadrant h > 0,
    h_i > 0: z runs from where the boundary crosses the h_i axis
    (boundary_h = 0, in (0, π/2)) to z_u where it returns to h_i = 0 at the
    closure gain.  Both ends sit exactly on an axis, so sampling stays
    strictly interior. */
[[nodiscard]] inline Polyline stability_polyline(double tp) {
  if (tp <= 0.0) throw std::invalid_argument("stability_polyline: t_p must be > 0");
  const double zu = ultimate_z(tp);
  const double zc = roots::bisect([&](double z) { return boundary_h(tp, z); },
                                  1e-9, 0.5 * std::numbers::pi, 1e-14);
  Polyline pl{"gamma_s", {}};
  for (std::size_t k = 1; k <= kChartSamples; ++k) {
    const double z = zc + (zu - zc) * double(k) / double(kChartSamples + 1);
    pl.pts.push_back({boundary_h(tp, z), boundary_hi(tp, z)});
  }
  return pl;
}

/*! \brief Design chart for the delayed loop in the (h, h_i) plane.

  Curves: the stability boundary (gamma_s, clipped to the chart quadrant),
  constant phase-margin loci at 30/45/60 degrees
  (pm_30/pm_45/pm_60), and the two overshoot-constraint curves (gamma_y at
  PO_y = 0.0105, gamma_v at PO_v = 0.1).  Points: the classic rule tunings
  (B1 reaction-curve, B2 ultimate-cycle, B3 ISTE correlation where published)
  and the overshoot-constrained optimum B4.
*/
[[nodiscard]] inline ChartBundle delay_chart(double tp,
                                             StepMode mode = StepMode::integral_only) {
  if (tp <= 0.0) throw std::invalid_argument("delay_chart: t_p must be > 0");
  ChartBundle out;
  out.tp = tp;
  out.x_label = "h";
  out.y_label = "hi";

  out.curves.push_back(stability_polyline(tp));

  // Constant phase-margin loci: at crossover z the open-loop phase condition
  // fixes the direction of the (h_i, h·z) vector, ψ(z) = φ − π/2 +
  // atan2(t_p·z, 1) + z, and the unit-magnitude condition fixes its length
  // z·√(1+t_p²z²).  The locus spans ψ ∈ [0, π/2]: it starts on the h_i axis
  // and ends on the h axis.
  for (const double deg : {30.0, 45.0, 60.0}) {
    const double phi = deg * std::numbers::pi / 180.0;
    const auto psi = [&](double z) {
      return phi - 0.5 * std::numbers::pi + std::atan2(tp * z, 1.0) + z;
    };
    const double z0 = roots::bisect(psi, 1e-12, 0.5 * std::numbers::pi, 1e-14);
    const double z1 = roots::bisect(
        [&](double z) { return psi(z) - 0.5 * std::numbers::pi; }, z0,
        2.0 * std::numbers::pi, 1e-14);
    Polyline pl{"pm_" + std::to_string(int(deg)), {}};
    // Endpoints sit exactly on the chart axes (ψ = 0 and π/2); sample
    // strictly between them to keep every point inside the quadrant.
    for (std::size_t k = 1; k <= kChartSamples; ++k) {
      const double z = z0 + (z1 - z0) * double(k) / double(kChartSamples + 1);
      const double mag = std::sqrt(1.0 + tp * tp * z * z);
      pl.pts.push_back({mag * std::sin(psi(z)), z * mag * std::cos(psi(z))});
    }
    out.curves.push_back(std::move(pl));
  }

  // Overshoot-constraint curves, traced pointwise across the stable gains.
  {
    const double hu = ultimate_gain(tp).h_u;
    std::vector<std::optional<CurvePoint>> ys(kChartSamples), vs(kChartSamples);
    parallel_for(kChartSamples, [&](std::size_t k) {
      const double h = hu * (0.02 + 0.96 * double(k) / double(kChartSamples - 1));
      ys[k] = trace_curve(tp, CurveId::gamma_y, h, mode).point;
      vs[k] = trace_curve(tp, CurveId::gamma_v, h, mode).point;
    });
    Polyline py{"gamma_y", {}}, pv{"gamma_v", {}};
    for (std::size_t k = 0; k < kChartSamples; ++k) {
      if (ys[k]) py.pts.push_back({ys[k]->h, ys[k]->hi});
      if (vs[k]) pv.pts.push_back({vs[k]->h, vs[k]->hi});
    }
    out.curves.push_back(std::move(py));
    out.curves.push_back(std::move(pv));
  }

  const RuleResult b1 = apply_rule(RuleId::zn_time, tp);
  const RuleResult b2 = apply_rule(RuleId::zn_freq, tp);
  out.points.push_back({"B1", b1.gains.h, b1.gains.hi});
  out.points.push_back({"B2", b2.gains.h, b2.gains.hi});
  if (tp >= 0.5 && tp <= 10.0) {
    const RuleResult b3 = apply_rule(RuleId::za_iste, tp);
    out.points.push_back({"B3", b3.gains.h, b3.gains.hi});
  }
  const OptimumResult opt = find_optimum(tp, mode);
  out.points.push_back({"B4", opt.point.h, opt.point.hi});
  return out;
}

} // namespace pitune
