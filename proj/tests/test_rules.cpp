#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "pitune/rules.hpp"
#include "reference_data.hpp"

using namespace pitune;
using Catch::Approx;

TEST_CASE("reaction-curve rule") {
  const RuleResult r = apply_rule(RuleId::zn_time, 10.0);
  CHECK(r.gains.h == 9.0);
  CHECK(r.gains.hi == 3.0); // T_i = 3 delay units
  CHECK_FALSE(r.extrapolated);

  for (const double tp : {0.1, 0.55, 2.5, 7.0}) {
    const Gains g = apply_rule(RuleId::zn_time, tp).gains;
    CHECK(g.h == 0.9 * tp);
    CHECK(g.hi == g.h / 3.0);
  }
  CHECK_THROWS_AS(apply_rule(RuleId::zn_time, 0.0), std::invalid_argument);
}

TEST_CASE("ultimate-cycle rule") {
  const Gains g = apply_rule(RuleId::zn_freq, 1.0).gains;
  CHECK(g.h == Approx(0.905).margin(1e-3));
  CHECK(g.hi == Approx(0.365).margin(1e-3));

  // h = 0.4·closure gain; T_i = 0.8 ultimate periods
  const double zu = ultimate_z(1.0);
  CHECK(g.h == Approx(0.4 * std::sqrt(1.0 + zu * zu)).margin(1e-12));
  CHECK(g.hi == Approx(g.h * zu / (1.6 * std::numbers::pi)).margin(1e-12));
}

TEST_CASE("ISTE correlation rule") {
  const Gains low = apply_rule(RuleId::za_iste, 0.55).gains;
  CHECK(low.h == Approx(0.563).margin(1e-3));
  CHECK(low.hi == Approx(0.609).margin(1e-3));

  // the branch seam: t_p = 1 still belongs to the low correlation set
  const Gains seam = apply_rule(RuleId::za_iste, 1.0).gains;
  CHECK(seam.h == Approx(0.786).margin(1e-12));
  CHECK(seam.hi == Approx(0.786 * 0.725).margin(1e-12));

  const Gains high = apply_rule(RuleId::za_iste, 2.0).gains;
  CHECK(high.h == Approx(0.712 * std::pow(2.0, 0.921)).margin(1e-12));
  CHECK(high.hi > 0.0);

  CHECK_FALSE(apply_rule(RuleId::za_iste, 0.9).extrapolated);
  CHECK(apply_rule(RuleId::za_iste, 0.95).extrapolated); // bridged gap
  CHECK_FALSE(apply_rule(RuleId::za_iste, 1.0).extrapolated);

  CHECK_THROWS_AS(apply_rule(RuleId::za_iste, 0.4), std::domain_error);
  CHECK_THROWS_AS(apply_rule(RuleId::za_iste, 10.5), std::domain_error);
}

TEST_CASE("shipped correlation quadratics") {
  const ProposedFits f = published_fits();
  CHECK(f.h_low.eval(0.55) == Approx(0.7237).margin(2e-4));
  CHECK(apply_rule(RuleId::proposed_fit, 0.55).gains.h == f.h_low.eval(0.55));

  // branch selection and the flagged gap between the published ranges
  CHECK_FALSE(eval_fits(f, 0.70).extrapolated);
  CHECK_FALSE(eval_fits(f, 0.85).extrapolated);
  const RuleResult gap_lo = eval_fits(f, 0.75);
  CHECK(gap_lo.extrapolated);
  CHECK(gap_lo.gains.h == f.h_low.eval(0.75)); // below the midpoint: low branch
  const RuleResult gap_hi = eval_fits(f, 0.80);
  CHECK(gap_hi.extrapolated);
  CHECK(gap_hi.gains.h == f.h_high.eval(0.80));

  CHECK_THROWS_AS(eval_fits(f, 0.05), std::domain_error);
  CHECK_THROWS_AS(eval_fits(f, 10.5), std::domain_error);
}

TEST_CASE("rule names are stable CLI identifiers") {
  CHECK(std::strcmp(rule_name(RuleId::zn_time), "zn_time") == 0);
  CHECK(std::strcmp(rule_name(RuleId::zn_freq), "zn_freq") == 0);
  CHECK(std::strcmp(rule_name(RuleId::za_iste), "za_iste") == 0);
  CHECK(std::strcmp(rule_name(RuleId::proposed_fit), "proposed_fit") == 0);
}

TEST_CASE("cached optimum points match the published table") {
  const auto& pts = optimum_reference_points();
  REQUIRE(pts.size() == std::size_t{13});
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(pts[k].tp == refdata::kGains[k].tp);
    CHECK(pts[k].h == refdata::kGains[k].pr_h);
    CHECK(pts[k].hi == refdata::kGains[k].pr_hi);
  }
}

TEST_CASE("refitting the correlations reproduces the shipped coefficients") {
  const ProposedFits f = fit_quadratics(optimum_reference_points());
  const ProposedFits p = published_fits();
  CHECK(f.h_low.c0 == Approx(p.h_low.c0).margin(0.02));
  CHECK(f.h_low.c1 == Approx(p.h_low.c1).margin(0.02));
  CHECK(f.h_low.c2 == Approx(p.h_low.c2).margin(0.02));
  CHECK(f.hi_low.c0 == Approx(p.hi_low.c0).margin(0.02));
  CHECK(f.hi_low.c1 == Approx(p.hi_low.c1).margin(0.02));
  CHECK(f.hi_low.c2 == Approx(p.hi_low.c2).margin(0.02));
  CHECK(f.h_high.c0 == Approx(p.h_high.c0).margin(0.02));
  CHECK(f.h_high.c1 == Approx(p.h_high.c1).margin(0.02));
  CHECK(f.h_high.c2 == Approx(p.h_high.c2).margin(0.02));
  CHECK(f.hi_high.c0 == Approx(p.hi_high.c0).margin(0.02));
  CHECK(f.hi_high.c1 == Approx(p.hi_high.c1).margin(0.02));
  CHECK(f.hi_high.c2 == Approx(p.hi_high.c2).margin(0.02));

  CHECK(f.h_low.eval(0.55) == Approx(0.7237).margin(0.01));

  // ranges come from the data extents
  CHECK(f.h_low.tp_lo == 0.10);
  CHECK(f.h_low.tp_hi == 0.70);
  CHECK(f.h_high.tp_lo == 0.85);
  CHECK(f.h_high.tp_hi == 10.0);
}

TEST_CASE("least-squares fit internals") {
  // normal equations leave residuals orthogonal to {1, x, x²}
  const ProposedFits f = fit_quadratics(optimum_reference_points());
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (const FitPoint& pt : optimum_reference_points()) {
    if (pt.tp > 0.775) continue;
    const double r = pt.h - f.h_low.eval(pt.tp);
    s0 += r;
    s1 += r * pt.tp;
    s2 += r * pt.tp * pt.tp;
  }
  CHECK(std::abs(s0) < 1e-9);
  CHECK(std::abs(s1) < 1e-9);
  CHECK(std::abs(s2) < 1e-9);

  // exactly collinear input: the quadratic term vanishes
  const std::vector<FitPoint> line = {
      {1.0, 5.0, 1.0}, {2.0, 8.0, 1.0}, {3.0, 11.0, 1.0},
      {4.0, 14.0, 1.0}, {5.0, 17.0, 1.0}, {6.0, 20.0, 1.0},
  };
  const ProposedFits lf = fit_quadratics(line, 3.5);
  CHECK(std::abs(lf.h_low.c2) < 1e-10);
  CHECK(lf.h_low.eval(2.5) == Approx(9.5).margin(1e-9));

  // fewer than three points on a branch cannot determine a quadratic
  const std::vector<FitPoint> thin = {
      {0.1, 1.0, 1.0}, {0.2, 1.0, 1.0}, {1.0, 1.0, 1.0},
      {2.0, 1.0, 1.0}, {3.0, 1.0, 1.0},
  };
  CHECK_THROWS_AS(fit_quadratics(thin), NumericalError);
}
