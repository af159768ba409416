#include "catch2/catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pitune/charts.hpp"
#include "pitune/emit.hpp"
#include "reference_data.hpp"

using namespace pitune;
using Catch::Approx;

namespace {

const Polyline& curve_named(const ChartBundle& c, const std::string& name) {
  for (const Polyline& pl : c.curves)
    if (pl.name == name) return pl;
  FAIL("no curve named " + name);
  return c.curves.front();
}

const NamedPoint& point_named(const ChartBundle& c, const std::string& name) {
  for (const NamedPoint& pt : c.points)
    if (pt.name == name) return pt;
  FAIL("no point named " + name);
  return c.points.front();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("delay-free design chart") {
  const ChartBundle c = nodelay_chart();
  CHECK_FALSE(c.tp.has_value());
  CHECK(c.x_label == "h");
  CHECK(c.y_label == "ti");
  REQUIRE(c.curves.size() == 8);
  CHECK(c.curves[0].name == "damping_borderline");
  CHECK(c.curves[1].name == "gamma_v");
  CHECK(c.curves[2].name == "gamma_y_1");
  CHECK(c.curves[4].name == "gamma_y_3");
  CHECK(c.curves[5].name == "gamma_i_1");
  CHECK(c.curves[7].name == "gamma_i_3");

  // every drawn point sits in the open chart quadrant
  for (const Polyline& pl : c.curves) {
    for (const auto& [x, y] : pl.pts) {
      CHECK(x > 0.0);
      CHECK(y > 0.0);
    }
  }

  // the damping borderline is defined at every sample and passes through (1, 1)
  const Polyline& border = curve_named(c, "damping_borderline");
  REQUIRE(border.pts.size() == kChartSamples);
  const auto at1 = std::find_if(border.pts.begin(), border.pts.end(),
                                [](const auto& p) { return p[0] == 1.0; });
  REQUIRE(at1 != border.pts.end());
  CHECK((*at1)[1] == Approx(1.0).margin(1e-12));

  // the control-overshoot locus ends where its floor reaches the 0.1 ceiling
  const Polyline& gv = curve_named(c, "gamma_v");
  CHECK(gv.pts.size() > 50);
  CHECK(gv.pts.size() < kChartSamples);
  CHECK(gv.pts.back()[0] < 2.8);
  for (std::size_t k = 0; k < gv.pts.size(); k += 17)
    CHECK(nodelay::overshoot_v({gv.pts[k][0], gv.pts[k][1]}) == Approx(0.1).margin(1e-9));

  // constraint levels are honored along the loci
  const Polyline& gy2 = curve_named(c, "gamma_y_2");
  for (std::size_t k = 0; k < gy2.pts.size(); k += 17)
    CHECK(nodelay::overshoot_y({gy2.pts[k][0], gy2.pts[k][1]}) == Approx(0.0105).margin(1e-9));
  const Polyline& gi2 = curve_named(c, "gamma_i_2");
  CHECK_FALSE(gi2.pts.empty());
  for (std::size_t k = 0; k < gi2.pts.size(); k += 17)
    CHECK(nodelay::ise_closed_form({gi2.pts[k][0], gi2.pts[k][1]}) == Approx(1.2).margin(1e-9));

  // point B is the two-constraint optimum
  REQUIRE(c.points.size() == 1);
  const NoDelayGains b = nodelay::optimum();
  CHECK(c.points[0].name == "B");
  CHECK(c.points[0].x == b.h);
  CHECK(c.points[0].y == b.ti);
}

TEST_CASE("delayed-loop design chart") {
  const ChartBundle c = delay_chart(0.55);
  REQUIRE(c.tp.has_value());
  CHECK(*c.tp == 0.55);
  CHECK(c.x_label == "h");
  CHECK(c.y_label == "hi");
  REQUIRE(c.curves.size() == 6);
  CHECK(c.curves[0].name == "gamma_s");
  CHECK(c.curves[1].name == "pm_30");
  CHECK(c.curves[2].name == "pm_45");
  CHECK(c.curves[3].name == "pm_60");
  CHECK(c.curves[4].name == "gamma_y");
  CHECK(c.curves[5].name == "gamma_v");

  for (const Polyline& pl : c.curves) {
    for (const auto& [x, y] : pl.pts) {
      CHECK(x > 0.0);
      CHECK(y > 0.0);
    }
  }

  // stability boundary stays strictly inside the quadrant, below closure
  const Polyline& gs = curve_named(c, "gamma_s");
  REQUIRE(gs.pts.size() == kChartSamples);
  for (const auto& [x, y] : gs.pts) CHECK(x < closure_gain(0.55));

  // constant-margin locus re-validated through the margin computation itself
  const Polyline& pm45 = curve_named(c, "pm_45");
  REQUIRE(pm45.pts.size() == kChartSamples);
  for (std::size_t k = 0; k < pm45.pts.size(); k += 40) {
    const PhaseMarginResult pm = phase_margin(0.55, {pm45.pts[k][0], pm45.pts[k][1]});
    CHECK(pm.pm_deg == Approx(45.0).margin(0.01));
  }

  // the output-overshoot curve passes by the published optimum tuning
  const Polyline& gy = curve_named(c, "gamma_y");
  REQUIRE_FALSE(gy.pts.empty());
  const auto near = std::min_element(gy.pts.begin(), gy.pts.end(),
                                     [](const auto& a, const auto& b) {
                                       return std::abs(a[0] - 0.70) < std::abs(b[0] - 0.70);
                                     });
  CHECK(std::abs((*near)[1] - 0.737) < 0.01);

  REQUIRE(c.points.size() == 4);
  CHECK(point_named(c, "B1").x == Approx(0.9 * 0.55).margin(1e-12));
  CHECK(point_named(c, "B3").y == Approx(0.609).margin(1e-3));
  const OptimumResult opt = find_optimum(0.55);
  CHECK(point_named(c, "B4").x == opt.point.h);
  CHECK(point_named(c, "B4").y == opt.point.hi);

  CHECK_THROWS_AS(delay_chart(0.0), std::invalid_argument);
}

TEST_CASE("correlation point drops off the chart outside its range") {
  const ChartBundle c = delay_chart(0.3); // below the ISTE rule's span
  REQUIRE(c.points.size() == 3);
  for (const NamedPoint& pt : c.points) CHECK(pt.name != "B3");
}

TEST_CASE("six-significant-digit formatting") {
  CHECK(format_sig(0.1) == "0.1");
  CHECK(format_sig(1.0) == "1");
  CHECK(format_sig(0.73721591) == "0.737216");
  CHECK(format_sig(1234567.0) == "1.23457e+06");
  CHECK(format_sig(-0.00125) == "-0.00125");

  for (const double v : {0.7372159134, 3.14159265358979, 123.4567890123, 1e-7}) {
    const double q = quantize_sig(v);
    CHECK(quantize_sig(q) == q);           // quantization is idempotent
    CHECK(format_sig(q) == format_sig(v)); // and text-stable
  }
}

TEST_CASE("chart CSV and JSON carry identical values") {
  ChartBundle c;
  c.x_label = "h";
  c.y_label = "ti";
  c.curves.push_back({"c1", {{0.5, 1.5555555}, {1.0, 0.73721591}}});
  c.points.push_back({"P", 0.1234567, 2.0});

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "pitune_test_chart";
  std::filesystem::remove_all(dir);
  const auto paths = write_chart_csv(c, dir);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].filename() == "c1.csv");
  CHECK(paths[1].filename() == "points.csv");

  const std::string csv = slurp(paths[0]);
  CHECK(csv == "h,ti\n0.5,1.55556\n1,0.737216\n");
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(slurp(paths[1]) == "name,h,ti\nP,0.123457,2\n");

  const nlohmann::ordered_json j = chart_json(c);
  CHECK(j["tp"].is_null());
  CHECK(j["x"] == "h");
  REQUIRE(j["curves"]["c1"].size() == 2);
  // JSON numbers equal what the CSV text parses back to, bit for bit
  CHECK(j["curves"]["c1"][0][1].get<double>() == std::strtod("1.55556", nullptr));
  CHECK(j["curves"]["c1"][1][1].get<double>() == std::strtod("0.737216", nullptr));
  CHECK(j["points"]["P"][0].get<double>() == std::strtod("0.123457", nullptr));

  // stable key order and a trailing newline on the serialized form
  std::ostringstream s1, s2;
  write_chart_json(c, s1);
  write_chart_json(c, s2);
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().rfind("{\n  \"tp\": null,\n  \"x\": \"h\",\n  \"y\": \"ti\",", 0) == 0);
  CHECK(s1.str().back() == '\n');

  // writing the same chart twice produces identical bytes
  const std::string first = slurp(paths[0]);
  write_chart_csv(c, dir);
  CHECK(slurp(paths[0]) == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("step-response CSV layout") {
  const SampledResponse r = sample_response(solve_steps(1.0, {0.9, 0.3}));
  std::ostringstream out;
  write_response_csv(r, out);
  const std::string s = out.str();
  CHECK(s.rfind("t,y,v\n0.00,1.000000,1.000000\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 702); // header + 701 samples
}

TEST_CASE("comparison-table writers and blank policy") {
  // handmade rows: one with every column, one with the unpublished blanks
  ComparisonRow full;
  full.tp = 0.55;
  full.zn_time = Gains{0.495, 0.165};
  full.zn_time_idx = PerformanceIndexes{0.0, 0.25, 4.193};
  full.zn_freq = Gains{0.9, 0.36};
  full.zn_freq_idx = PerformanceIndexes{0.1, 0.3, 2.0};
  full.za_iste = Gains{0.563, 0.609};
  full.za_iste_idx = PerformanceIndexes{0.0, 0.1, 1.9};
  full.proposed = Gains{0.70, 0.737};
  full.proposed_idx = PerformanceIndexes{0.0105, 0.086, 1.869};

  ComparisonRow sparse;
  sparse.tp = 0.4;
  sparse.zn_time = Gains{0.36, 0.12};
  sparse.zn_time_idx = PerformanceIndexes{0.0, 0.0, 4.6};
  sparse.zn_freq = Gains{0.8, 0.3};
  sparse.zn_freq_idx = PerformanceIndexes{0.0, 0.0, 3.0};
  sparse.proposed = Gains{0.585, 0.726};
  sparse.proposed_idx = PerformanceIndexes{0.0103, 0.051, 1.786};

  std::ostringstream gains;
  write_gains_table_csv({full, sparse}, gains);
  CHECK(gains.str() ==
        "tp,h_zn_time,h_zn_freq,h_za_iste,h_proposed,"
        "hi_zn_time,hi_zn_freq,hi_za_iste,hi_proposed\n"
        "0.55,0.495,0.9,0.563,0.7,0.165,0.36,0.609,0.737\n"
        "0.4,0.36,0.8,,0.585,0.12,0.3,,0.726\n");

  std::ostringstream idx;
  write_index_table_csv({full, sparse}, idx);
  CHECK(idx.str() ==
        "tp,po_y_proposed,po_v_zn_time,po_v_zn_freq,po_v_za_iste,po_v_proposed,"
        "ise_zn_time,ise_zn_freq,ise_za_iste,ise_proposed\n"
        "0.55,0.0105,0.25,0.3,0.1,0.086,4.193,2,1.9,1.869\n"
        "0.4,0.0103,,,,0.051,4.6,3,,1.786\n");
}

TEST_CASE("computed comparison row matches its ingredients") {
  const std::vector<ComparisonRow> rows = comparison_rows({0.55});
  REQUIRE(rows.size() == 1);
  const ComparisonRow& r = rows[0];
  REQUIRE(r.za_iste.has_value());
  CHECK(r.zn_time->h == apply_rule(RuleId::zn_time, 0.55).gains.h);
  CHECK(r.zn_freq->hi == apply_rule(RuleId::zn_freq, 0.55).gains.hi);
  CHECK(r.zn_time_idx->ise == delay_indexes(0.55, *r.zn_time).ise);
  CHECK(r.proposed_idx->ise == Approx(1.869).margin(0.005));
}

TEST_CASE("correlation check table") {
  std::ostringstream out;
  write_fit_table_csv({0.55, 0.75, 2.5}, published_fits(), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "tp,h,hi,po_y,po_v,ise,extrapolated");
  std::getline(in, line);
  CHECK(line.rfind("0.55,", 0) == 0);
  CHECK(line.find(",no") != std::string::npos);
  std::getline(in, line); // the gap between the published branch ranges
  CHECK(line.rfind("0.75,", 0) == 0);
  CHECK(line.size() > 4);
  CHECK(line.substr(line.size() - 4) == ",yes");
  std::getline(in, line); // large tp: no output overshoot, field left blank
  CHECK(line.rfind("2.5,", 0) == 0);
  const auto first_comma = line.find(',', 4);
  const auto second_comma = line.find(',', first_comma + 1);
  CHECK(line[first_comma + 1] != ',');  // hi present …
  CHECK(line[second_comma + 1] == ','); // … but po_y is blank (no overshoot)
}

TEST_CASE("canonical grid spans the published tables") {
  const std::vector<double> g = canonical_tp_grid();
  REQUIRE(g.size() == std::size_t{13});
  for (std::size_t k = 0; k < g.size(); ++k)
    CHECK(g[k] == refdata::kGains[k].tp);
}
