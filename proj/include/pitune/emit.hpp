#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pitune/charts.hpp"
#include "pitune/optimize.hpp"
#include "pitune/response.hpp"
#include "pitune/rules.hpp"
#include "pitune/steps.hpp"

namespace pitune {

/*! \brief Format a value to at most 6 significant digits, trailing zeros
    stripped.  All emitted numbers pass through here so CSV text and JSON
    numbers carry exactly the same values. */
[[nodiscard]] inline std::string format_sig(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

//! The double that format_sig's text parses back to (used when the same
//! value must also appear as a JSON number).
[[nodiscard]] inline double quantize_sig(double v) {
  return std::strtod(format_sig(v).c_str(), nullptr);
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary); // LF line endings on every platform
  if (!out) throw std::runtime_error("cannot open for writing: " + p.string());
  return out;
}

} // namespace detail

/*! \brief Write one CSV file per curve plus points.csv into \p dir.

  Each curve file is named <curve>.csv with header "<x_label>,<y_label>";
  points.csv has header "name,<x_label>,<y_label>".  Returns the paths
  written, curve files first, in bundle order.
*/
inline std::vector<std::filesystem::path>
write_chart_csv(const ChartBundle& chart, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const Polyline& pl : chart.curves) {
    const std::filesystem::path p = dir / (pl.name + ".csv");
    std::ofstream out = detail::open_out(p);
    out << chart.x_label << ',' << chart.y_label << '\n';
    for (const auto& [x, y] : pl.pts)
      out << format_sig(x) << ',' << format_sig(y) << '\n';
    written.push_back(p);
  }
  const std::filesystem::path p = dir / "points.csv";
  std::ofstream out = detail::open_out(p);
  out << "name," << chart.x_label << ',' << chart.y_label << '\n';
  for (const NamedPoint& pt : chart.points)
    out << pt.name << ',' << format_sig(pt.x) << ',' << format_sig(pt.y) << '\n';
  written.push_back(p);
  return written;
}

/*! \brief Serialize a chart as JSON with stable key order.

  Numbers are quantized through format_sig first, so parsing a curve from the
  CSV emission and from here yields bit-identical doubles.
*/
[[nodiscard]] inline nlohmann::ordered_json chart_json(const ChartBundle& chart) {
  nlohmann::ordered_json j;
  if (chart.tp) j["tp"] = quantize_sig(*chart.tp);
  else j["tp"] = nullptr;
  j["x"] = chart.x_label;
  j["y"] = chart.y_label;
  nlohmann::ordered_json curves = nlohmann::ordered_json::object();
  for (const Polyline& pl : chart.curves) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [x, y] : pl.pts)
      arr.push_back({quantize_sig(x), quantize_sig(y)});
    curves[pl.name] = std::move(arr);
  }
  j["curves"] = std::move(curves);
  nlohmann::ordered_json points = nlohmann::ordered_json::object();
  for (const NamedPoint& pt : chart.points)
    points[pt.name] = {quantize_sig(pt.x), quantize_sig(pt.y)};
  j["points"] = std::move(points);
  return j;
}

inline void write_chart_json(const ChartBundle& chart, std::ostream& out) {
  out << chart_json(chart).dump(2) << '\n';
}

// ---- rule-comparison tables -------------------------------------------------

/*! \brief Gains and closed-loop indexes for every rule at one t_p.  Rules not
    published at that t_p are absent. */
struct ComparisonRow {
  double tp;
  std::optional<Gains> zn_time, zn_freq, za_iste, proposed;
  std::optional<PerformanceIndexes> zn_time_idx, zn_freq_idx, za_iste_idx, proposed_idx;
};

//! The t_p grid the comparison tables are published on.
[[nodiscard]] inline std::vector<double> canonical_tp_grid() {
  return {0.10, 0.25, 0.40, 0.55, 0.70, 0.85, 1.00,
          2.50, 4.00, 5.50, 7.00, 8.50, 10.00};
}

/*! \brief Build comparison rows: classic rules by formula, the "proposed"
    column from the constrained optimizer itself.  Rows are independent and
    computed in parallel. */
[[nodiscard]] inline std::vector<ComparisonRow>
comparison_rows(const std::vector<double>& tps,
                StepMode mode = StepMode::integral_only) {
  std::vector<ComparisonRow> rows(tps.size());
  parallel_for(tps.size(), [&](std::size_t k) {
    const double tp = tps[k];
    ComparisonRow& r = rows[k];
    r.tp = tp;
    r.zn_time = apply_rule(RuleId::zn_time, tp).gains;
    r.zn_time_idx = delay_indexes(tp, *r.zn_time, mode);
    r.zn_freq = apply_rule(RuleId::zn_freq, tp).gains;
    r.zn_freq_idx = delay_indexes(tp, *r.zn_freq, mode);
    if (tp >= 0.5 && tp <= 10.0) {
      r.za_iste = apply_rule(RuleId::za_iste, tp).gains;
      r.za_iste_idx = delay_indexes(tp, *r.za_iste, mode);
    }
    const OptimumResult opt = find_optimum(tp, mode);
    r.proposed = Gains{opt.point.h, opt.point.hi};
    r.proposed_idx = opt.point.indexes;
  });
  return rows;
}

namespace detail {

//! Blank-when-zero: a zero overshoot is printed as an empty field, mirroring
//! the dashes in the published comparison (the response never crosses the
//! level, so "how far past it" has no value to show).
inline std::string po_field(const std::optional<PerformanceIndexes>& idx, bool of_v) {
  if (!idx) return "";
  const double po = of_v ? idx->po_v : idx->po_y;
  return po == 0.0 ? "" : format_sig(po);
}

inline std::string gain_field(const std::optional<Gains>& g, bool of_hi) {
  return g ? format_sig(of_hi ? g->hi : g->h) : "";
}

} // namespace detail

/*! \brief Gains table: per rule, h and h_i columns across the t_p grid. */
inline void write_gains_table_csv(const std::vector<ComparisonRow>& rows,
                                  std::ostream& out) {
  out << "tp,h_zn_time,h_zn_freq,h_za_iste,h_proposed,"
         "hi_zn_time,hi_zn_freq,hi_za_iste,hi_proposed\n";
  for (const ComparisonRow& r : rows) {
    out << format_sig(r.tp);
    for (const auto* g : {&r.zn_time, &r.zn_freq, &r.za_iste, &r.proposed})
      out << ',' << detail::gain_field(*g, false);
    for (const auto* g : {&r.zn_time, &r.zn_freq, &r.za_iste, &r.proposed})
      out << ',' << detail::gain_field(*g, true);
    out << '\n';
  }
}

/*! \brief Index table: PO_y of the proposed tuning, then PO_v and ISE for
    every rule.  Overshoots of exactly zero are left blank. */
inline void write_index_table_csv(const std::vector<ComparisonRow>& rows,
                                  std::ostream& out) {
  out << "tp,po_y_proposed,po_v_zn_time,po_v_zn_freq,po_v_za_iste,po_v_proposed,"
         "ise_zn_time,ise_zn_freq,ise_za_iste,ise_proposed\n";
  for (const ComparisonRow& r : rows) {
    out << format_sig(r.tp) << ',' << detail::po_field(r.proposed_idx, false);
    for (const auto* i : {&r.zn_time_idx, &r.zn_freq_idx, &r.za_iste_idx, &r.proposed_idx})
      out << ',' << detail::po_field(*i, true);
    for (const auto* i : {&r.zn_time_idx, &r.zn_freq_idx, &r.za_iste_idx, &r.proposed_idx})
      out << ',' << (*i ? format_sig((*i)->ise) : "");
    out << '\n';
  }
}

/*! \brief Correlation check table: gains from the fitted quadratics and the
    indexes they achieve, across a t_p grid. */
inline void write_fit_table_csv(const std::vector<double>& tps,
                                const ProposedFits& fits, std::ostream& out,
                                StepMode mode = StepMode::integral_only) {
  struct Row {
    Gains g;
    bool extrapolated;
    PerformanceIndexes idx;
  };
  std::vector<Row> rows(tps.size());
  parallel_for(tps.size(), [&](std::size_t k) {
    const RuleResult rr = eval_fits(fits, tps[k]);
    rows[k] = {rr.gains, rr.extrapolated, delay_indexes(tps[k], rr.gains, mode)};
  });
  out << "tp,h,hi,po_y,po_v,ise,extrapolated\n";
  for (std::size_t k = 0; k < tps.size(); ++k) {
    const Row& r = rows[k];
    out << format_sig(tps[k]) << ',' << format_sig(r.g.h) << ','
        << format_sig(r.g.hi) << ','
        << (r.idx.po_y == 0.0 ? "" : format_sig(r.idx.po_y)) << ','
        << (r.idx.po_v == 0.0 ? "" : format_sig(r.idx.po_v)) << ','
        << format_sig(r.idx.ise) << ',' << (r.extrapolated ? "yes" : "no")
        << '\n';
  }
}

/*! \brief Time-series CSV of a sampled step response: t,y,v with t at two
    decimals and values at six. */
inline void write_response_csv(const SampledResponse& r, std::ostream& out) {
  out << "t,y,v\n";
  char buf[96];
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.2f,%.6f,%.6f\n", r.t[k], r.y[k], r.v[k]);
    out << buf;
  }
}

} // namespace pitune
