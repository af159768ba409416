// Emits ready-to-plot chart data: the delay-free design chart plus delayed
// charts for tp = 0.55 and tp = 2.5, as CSV files under ./charts/.

#include <cstdio>

#include "pitune/pitune.hpp"

int main() {
  using namespace pitune;

  const auto dump = [](const ChartBundle& bundle, const char* dir) {
    const auto paths = write_chart_csv(bundle, dir);
    std::printf("%s: %zu curve files + points.csv\n", dir, paths.size() - 1);
  };

  dump(nodelay_chart(), "charts/no_delay");
  dump(delay_chart(0.55), "charts/tp_0.55");
  dump(delay_chart(2.5), "charts/tp_2.5");

  std::printf("plot e.g.:  gnuplot> plot 'charts/tp_0.55/gamma_s.csv' u 1:2 w l\n");
  return 0;
}
