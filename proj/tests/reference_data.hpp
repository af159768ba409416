#pragma once

// Published reference values the library is expected to reproduce: classic-rule
// and optimum tunings with their closed-loop indexes on the canonical t_p grid
// (three decimals), and the correlation-table check points (four decimals).
// Blank cells of the published tables are encoded as NaN.

#include <cmath>
#include <cstddef>
#include <limits>

namespace refdata {

inline constexpr double kBlank = std::numeric_limits<double>::quiet_NaN();

inline bool is_blank(double v) { return std::isnan(v); }

// ---- gains table (four tunings per t_p) -------------------------------------
struct GainsRow {
  double tp;
  double znt_h, znt_hi; // reaction-curve rule
  double znf_h, znf_hi; // ultimate-cycle rule
  double za_h, za_hi;   // ISTE correlation (blank where unpublished)
  double pr_h, pr_hi;   // overshoot-constrained optimum
};

inline constexpr GainsRow kGains[] = {
    {0.10, 0.090, 0.030, 0.416, 0.237, kBlank, kBlank, 0.45, 0.787},
    {0.25, 0.225, 0.075, 0.475, 0.243, kBlank, kBlank, 0.50, 0.738},
    {0.40, 0.360, 0.120, 0.552, 0.262, kBlank, kBlank, 0.60, 0.724},
    {0.55, 0.495, 0.165, 0.636, 0.285, 0.563, 0.609, 0.70, 0.737},
    {0.70, 0.630, 0.210, 0.724, 0.311, 0.644, 0.605, 0.92, 0.763},
    {0.85, 0.765, 0.255, 0.814, 0.338, 0.718, 0.589, 1.10, 0.766},
    {1.00, 0.900, 0.300, 0.905, 0.365, 0.786, 0.570, 1.15, 0.744},
    {2.50, 2.250, 0.750, 1.835, 0.654, 1.656, 0.576, 2.10, 0.682},
    {4.00, 3.600, 1.200, 2.774, 0.947, 2.553, 0.578, 3.00, 0.654},
    {5.50, 4.950, 1.650, 3.715, 1.241, 3.423, 0.574, 3.80, 0.633},
    {7.00, 6.300, 2.100, 4.656, 1.535, 4.274, 0.569, 4.75, 0.628},
    {8.50, 7.650, 2.550, 5.598, 1.829, 5.111, 0.564, 6.00, 0.640},
    {10.00, 9.000, 3.000, 6.540, 2.123, 5.936, 0.560, 6.65, 0.622},
};

inline constexpr std::size_t kGainsRows = sizeof kGains / sizeof kGains[0];

// ---- index table ------------------------------------------------------------
// PO_v blanks mean the controller output never undershoots (index exactly 0);
// likewise the PO_y blank of the optimum column at larger t_p.
struct IndexRow {
  double tp;
  double poy_pr;
  double pov_znt, pov_znf, pov_za, pov_pr;
  double ise_znt, ise_znf, ise_za, ise_pr;
};

inline constexpr IndexRow kIndexes[] = {
    {0.10, 0.010, kBlank, kBlank, kBlank, 0.014, 6.095, 3.186, kBlank, 1.524},
    {0.25, 0.010, kBlank, kBlank, kBlank, 0.029, 5.192, 3.266, kBlank, 1.674},
    {0.40, 0.010, kBlank, kBlank, kBlank, 0.044, 4.605, 3.261, kBlank, 1.788},
    {0.55, 0.010, kBlank, kBlank, kBlank, 0.086, 4.193, 3.229, 1.998, 1.869},
    {0.70, 0.010, kBlank, kBlank, kBlank, 0.099, 3.896, 3.191, 2.098, 1.945},
    {0.85, kBlank, kBlank, kBlank, kBlank, 0.100, 3.674, 3.154, 2.212, 2.037},
    {1.00, kBlank, kBlank, kBlank, kBlank, 0.100, 3.502, 3.119, 2.333, 2.129},
    {2.50, kBlank, 0.177, 0.112, 0.032, 0.100, 2.822, 2.925, 3.089, 2.939},
    {4.00, kBlank, 0.849, 0.609, 0.049, 0.100, 2.647, 2.863, 3.698, 3.582},
    {5.50, kBlank, 1.523, 1.108, 0.053, 0.100, 2.574, 2.837, 4.181, 4.077},
    {7.00, kBlank, 2.197, 1.608, 0.053, 0.100, 2.536, 2.825, 4.555, 4.458},
    {8.50, kBlank, 2.872, 2.108, 0.052, 0.100, 2.513, 2.819, 4.849, 4.754},
    {10.00, kBlank, 3.548, 2.608, 0.050, 0.100, 2.498, 2.815, 5.084, 4.993},
};

// ---- correlation-table check points -----------------------------------------
// Gains from the refit quadratics evaluated on the same grid, with the indexes
// they achieve (four decimals; PO_y blank where the response never undershoots).
struct FitRow {
  double tp, h, hi, po_y, po_v, ise;
};

inline constexpr FitRow kFitTable[] = {
    {0.10, 0.4546, 0.7846, 0.0096, 0.0100, 1.5259},
    {0.25, 0.4957, 0.7420, 0.0179, 0.0361, 1.6700},
    {0.40, 0.5854, 0.7247, 0.0103, 0.0512, 1.7864},
    {0.55, 0.7237, 0.7326, 0.0096, 0.0701, 1.8762},
    {0.70, 0.9106, 0.7657, 0.0104, 0.1052, 1.9410},
    {0.85, 1.0861, 0.7525, kBlank, 0.0850, 2.0509},
    {1.00, 1.1744, 0.7468, kBlank, 0.0974, 2.1315},
    {2.50, 2.0658, 0.6965, kBlank, 0.1294, 2.8900},
    {4.00, 2.9722, 0.6589, kBlank, 0.1115, 3.5606},
    {5.50, 3.8935, 0.6340, kBlank, 0.0913, 4.0928},
    {7.00, 4.8298, 0.6218, kBlank, 0.0821, 4.4885},
    {8.50, 5.7810, 0.6224, kBlank, 0.0895, 4.7722},
    {10.00, 6.7473, 0.6357, kBlank, 0.1158, 4.9695},
};

} // namespace refdata
