// pitune — PI tuning for first-order processes with dead time.
//
// Subcommands: tune, simulate, chart, compare, fit-table, stability,
// oracle-check.  Exit codes: 0 success, 2 bad input, 3 numerical or I/O
// failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pitune/pitune.hpp"

namespace {

using namespace pitune;

StepMode mode_from_flag(bool setpoint_kick) {
  return setpoint_kick ? StepMode::full_error : StepMode::integral_only;
}

std::ofstream open_or_die(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

// Writes either to a file or to stdout when path is empty.
template <class Fn>
void with_sink(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
  } else {
    std::ofstream out = open_or_die(path);
    fn(out);
  }
}

int run_tune(double K, double Tp, double L, const std::string& rule_name_arg,
             bool setpoint_kick) {
  const PlantModel plant{K, Tp, L};
  if (!plant.valid() || L <= 0.0)
    throw std::invalid_argument("tune: need K != 0, Tp > 0, L > 0");
  const double tp = normalized(plant).tp;
  Gains g{};
  std::string how;
  if (rule_name_arg == "proposed") {
    const OptimumResult opt = find_optimum(tp, mode_from_flag(setpoint_kick));
    g = {opt.point.h, opt.point.hi};
    how = opt.active_curve == CurveId::gamma_y ? "proposed (output-overshoot bound)"
                                               : "proposed (control-overshoot bound)";
  } else {
    RuleId id;
    if (rule_name_arg == "zn-time") id = RuleId::zn_time;
    else if (rule_name_arg == "zn-freq") id = RuleId::zn_freq;
    else if (rule_name_arg == "za-iste") id = RuleId::za_iste;
    else if (rule_name_arg == "fit") id = RuleId::proposed_fit;
    else throw std::invalid_argument("tune: unknown rule '" + rule_name_arg + "'");
    const RuleResult rr = apply_rule(id, tp);
    g = rr.gains;
    how = rule_name_arg + (rr.extrapolated ? " (extrapolated)" : "");
  }
  const PiController pi = denormalize(g, plant);
  const PerformanceIndexes idx = delay_indexes(tp, g, mode_from_flag(setpoint_kick));
  std::printf("plant: K=%g Tp=%g L=%g  (tp = Tp/L = %g)\n", K, Tp, L, tp);
  std::printf("rule:  %s\n", how.c_str());
  std::printf("normalized: h=%.6g hi=%.6g\n", g.h, g.hi);
  std::printf("controller: Kp=%.6g Ki=%.6g Ti=%.6g\n", pi.kp, pi.ki, pi.ti);
  std::printf("indexes: po_y=%.6g po_v=%.6g ise=%.6g\n", idx.po_y, idx.po_v, idx.ise);
  return 0;
}

int run_simulate(double tp, double h, double hi, const std::string& out_path,
                 bool use_oracle, bool setpoint_kick) {
  const StepMode mode = mode_from_flag(setpoint_kick);
  const SampledResponse r = use_oracle
                                ? simulate_loop(tp, {h, hi}, {}, mode)
                                : sample_response(solve_steps(tp, {h, hi}, 7, mode));
  with_sink(out_path, [&](std::ostream& os) { write_response_csv(r, os); });
  return 0;
}

int run_chart(std::optional<double> tp, bool no_delay, const std::string& format,
              const std::string& outdir, const std::string& out_path,
              bool setpoint_kick) {
  if (no_delay == tp.has_value())
    throw std::invalid_argument("chart: give exactly one of --tp or --no-delay");
  const ChartBundle bundle =
      no_delay ? nodelay_chart() : delay_chart(*tp, mode_from_flag(setpoint_kick));
  if (format == "csv") {
    const auto paths = write_chart_csv(bundle, outdir);
    for (const auto& p : paths) std::printf("%s\n", p.string().c_str());
  } else if (format == "json") {
    with_sink(out_path, [&](std::ostream& os) { write_chart_json(bundle, os); });
  } else {
    throw std::invalid_argument("chart: format must be csv or json");
  }
  return 0;
}

int run_compare(std::vector<double> tps, const std::string& outdir,
                bool setpoint_kick) {
  if (tps.empty()) tps = canonical_tp_grid();
  const auto rows = comparison_rows(tps, mode_from_flag(setpoint_kick));
  std::filesystem::create_directories(outdir);
  const auto gains_path = std::filesystem::path(outdir) / "gains.csv";
  const auto index_path = std::filesystem::path(outdir) / "indexes.csv";
  {
    std::ofstream out = open_or_die(gains_path.string());
    write_gains_table_csv(rows, out);
  }
  {
    std::ofstream out = open_or_die(index_path.string());
    write_index_table_csv(rows, out);
  }
  std::printf("%s\n%s\n", gains_path.string().c_str(), index_path.string().c_str());
  return 0;
}

int run_fit_table(std::vector<double> tps, const std::string& out_path,
                  bool setpoint_kick) {
  if (tps.empty()) tps = canonical_tp_grid();
  const ProposedFits fits = fit_quadratics(optimum_reference_points());
  with_sink(out_path, [&](std::ostream& os) {
    write_fit_table_csv(tps, fits, os, mode_from_flag(setpoint_kick));
  });
  return 0;
}

int run_stability(double tp, const std::string& out_path) {
  const UltimateGain ug = ultimate_gain(tp);
  std::printf("h_u=%.10g z_a=%.10g closure_gain=%.10g\n", ug.h_u, ug.z_a,
              tp > 0.0 ? closure_gain(tp) : 1.0);
  if (tp > 0.0) {
    const Polyline pl = stability_polyline(tp);
    with_sink(out_path, [&](std::ostream& os) {
      os << "h,hi\n";
      for (const auto& [x, y] : pl.pts)
        os << format_sig(x) << ',' << format_sig(y) << '\n';
    });
  }
  return 0;
}

int run_oracle_check(double tp, double h, double hi, double step, double tol,
                     bool setpoint_kick) {
  const StepMode mode = mode_from_flag(setpoint_kick);
  const SampledResponse a = sample_response(solve_steps(tp, {h, hi}, 7, mode));
  const SampledResponse b = simulate_loop(tp, {h, hi}, {step, 7.0}, mode);
  double dy = 0.0, dv = 0.0;
  for (std::size_t k = 0; k < a.y.size(); ++k) {
    dy = std::max(dy, std::abs(a.y[k] - b.y[k]));
    dv = std::max(dv, std::abs(a.v[k] - b.v[k]));
  }
  std::printf("max|dy|=%.3e max|dv|=%.3e (grid 0.01, horizon 7, oracle step %g)\n",
              dy, dv, step);
  if (tol > 0.0 && (dy > tol || dv > tol))
    throw NumericalError("oracle-check: deviation exceeds --tol");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"PI tuning for first-order processes with dead time"};
  app.require_subcommand(1);
  // --h is a domain option (normalized gain), so help keeps only its long form.
  app.set_help_flag("--help", "print help and exit");

  // Shared option state (CLI11 binds by reference).
  double K = 1.0, Tp = 1.0, L = 1.0, tp = 1.0, h = 0.0, hi = 0.0;
  double step = 1e-4, tol = 0.0;
  std::string rule = "proposed", format = "csv", outdir = ".", out_path;
  std::vector<double> tps;
  bool no_delay = false, use_oracle = false, setpoint_kick = false;

  CLI::App* tune = app.add_subcommand("tune", "plant parameters -> PI tuning");
  tune->add_option("--K", K, "plant steady-state gain")->required();
  tune->add_option("--Tp", Tp, "plant time constant [s]")->required();
  tune->add_option("--L", L, "plant dead time [s]")->required();
  tune->add_option("--rule", rule,
                   "proposed | fit | zn-time | zn-freq | za-iste (default proposed)");
  tune->add_flag("--setpoint-kick", setpoint_kick,
                 "let the proportional term act on the setpoint step as well");

  CLI::App* simulate = app.add_subcommand("simulate", "gains -> t,y,v response CSV");
  simulate->add_option("--tp", tp, "normalized time constant Tp/L")->required();
  simulate->add_option("--h", h, "normalized gain K*Kp")->required();
  simulate->add_option("--hi", hi, "normalized integral gain K*Ki*L")->required();
  simulate->add_option("--out", out_path, "output file (default stdout)");
  simulate->add_flag("--oracle", use_oracle, "integrate numerically instead of piecewise closed form");
  simulate->add_flag("--setpoint-kick", setpoint_kick,
                     "let the proportional term act on the setpoint step as well");

  CLI::App* chart = app.add_subcommand("chart", "tuning-chart curve bundle");
  CLI::Option* chart_tp = chart->add_option("--tp", tp, "normalized time constant");
  chart->add_flag("--no-delay", no_delay, "emit the delay-free chart")->excludes(chart_tp);
  chart->add_option("--format", format, "csv (one file per curve) | json");
  chart->add_option("--outdir", outdir, "directory for csv output (default .)");
  chart->add_option("--out", out_path, "json output file (default stdout)");
  chart->add_flag("--setpoint-kick", setpoint_kick,
                  "let the proportional term act on the setpoint step as well");

  CLI::App* compare = app.add_subcommand("compare", "rule-comparison tables (gains + indexes)");
  compare->add_option("--tp", tps, "tp values (default: the canonical 13)");
  compare->add_option("--outdir", outdir, "output directory (default .)");
  compare->add_flag("--setpoint-kick", setpoint_kick,
                    "let the proportional term act on the setpoint step as well");

  CLI::App* fit = app.add_subcommand("fit-table", "fitted-correlation check table");
  fit->add_option("--tp", tps, "tp values (default: the canonical 13)");
  fit->add_option("--out", out_path, "output file (default stdout)");
  fit->add_flag("--setpoint-kick", setpoint_kick,
                "let the proportional term act on the setpoint step as well");

  CLI::App* stab = app.add_subcommand("stability", "ultimate gain and stability boundary");
  stab->add_option("--tp", tp, "normalized time constant")->required();
  stab->add_option("--out", out_path, "boundary CSV file (default stdout)");

  CLI::App* ocheck = app.add_subcommand("oracle-check",
                                        "piecewise solution vs numerical integration");
  ocheck->add_option("--tp", tp, "normalized time constant")->required();
  ocheck->add_option("--h", h, "normalized gain")->required();
  ocheck->add_option("--hi", hi, "normalized integral gain")->required();
  ocheck->add_option("--step", step, "oracle integration step (default 1e-4)");
  ocheck->add_option("--tol", tol, "fail (exit 3) if max deviation exceeds this");
  ocheck->add_flag("--setpoint-kick", setpoint_kick,
                   "let the proportional term act on the setpoint step as well");

  for (CLI::App* sub : {tune, simulate, chart, compare, fit, stab, ocheck})
    sub->set_help_flag("--help", "print help and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e); // prints help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (tune->parsed()) return run_tune(K, Tp, L, rule, setpoint_kick);
    if (simulate->parsed()) return run_simulate(tp, h, hi, out_path, use_oracle, setpoint_kick);
    if (chart->parsed())
      return run_chart(chart_tp->count() ? std::optional<double>(tp) : std::nullopt,
                       no_delay, format, outdir, out_path, setpoint_kick);
    if (compare->parsed()) return run_compare(tps, outdir, setpoint_kick);
    if (fit->parsed()) return run_fit_table(tps, out_path, setpoint_kick);
    if (stab->parsed()) return run_stability(tp, out_path);
    if (ocheck->parsed()) return run_oracle_check(tp, h, hi, step, tol, setpoint_kick);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
