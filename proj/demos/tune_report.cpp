// Walkthrough: tune a heat-exchanger-ish plant (K=2, Tp=110 s, L=20 s) with
// every rule the library knows and print what each tuning costs.

#include <cstdio>

#include "pitune/pitune.hpp"

int main() {
  using namespace pitune;

  const PlantModel plant{2.0, 110.0, 20.0};
  const double tp = normalized(plant).tp;
  std::printf("plant: K=%g, Tp=%g s, L=%g s  ->  tp = %g\n", plant.gain_K,
              plant.time_constant_Tp, plant.delay_L, tp);

  const UltimateGain ug = ultimate_gain(tp);
  std::printf("stability: h_u = %.4f (z_a = %.4f), integral region closes at h = %.4f\n\n",
              ug.h_u, ug.z_a, closure_gain(tp));

  std::printf("%-28s %8s %8s %10s %10s | %8s %8s %8s\n", "rule", "h", "hi", "Kp",
              "Ti [s]", "po_y", "po_v", "ise");
  const auto report = [&](const char* name, Gains g) {
    const PiController pi = denormalize(g, plant);
    const PerformanceIndexes idx = delay_indexes(tp, g);
    std::printf("%-28s %8.4f %8.4f %10.4f %10.2f | %8.4f %8.4f %8.4f\n", name,
                g.h, g.hi, pi.kp, pi.ti, idx.po_y, idx.po_v, idx.ise);
  };

  report("reaction curve", apply_rule(RuleId::zn_time, tp).gains);
  report("ultimate cycle", apply_rule(RuleId::zn_freq, tp).gains);
  report("ISTE correlation", apply_rule(RuleId::za_iste, tp).gains);
  report("fitted correlation", apply_rule(RuleId::proposed_fit, tp).gains);

  const OptimumResult opt = find_optimum(tp);
  report(opt.active_curve == CurveId::gamma_y
             ? "constrained optimum (PO_y)"
             : "constrained optimum (PO_v)",
         {opt.point.h, opt.point.hi});

  const PhaseMarginResult pm = phase_margin(tp, {opt.point.h, opt.point.hi});
  std::printf("\noptimum phase margin: %.2f deg at crossover z = %.4f\n", pm.pm_deg,
              pm.z_b);
  return 0;
}
