// Percentile cutoffs per variable per window length and the 4-bin quantizer,
// including the published built-in tables.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "features.hpp"

namespace neptune {

struct PercentileTable {
  int window_s = 0;
  // [variable][0..2] = 25th/50th/75th percentile.
  std::array<std::array<double, 3>, kNumVariables> cutoffs{};
};

// Percentile by linear interpolation between closest ranks: for n sorted
// values the p-th percentile sits at rank h = (n-1)*p/100 + 1 (1-based).
double percentile(std::span<const double> sorted_values, double p);

// Cutoffs per variable over all feature rows of one window length. Needs at
// least 4 rows.
PercentileTable compute_percentiles(const std::vector<FeatureVector>& rows,
                                    int window_s);

struct QuantizedVector {
  std::array<uint8_t, kNumVariables> bins{};  // each 1..4
  int v1 = 0;
};

// bin 1: v <= p25; 2: p25 < v <= p50; 3: p50 < v <= p75; 4: v > p75.
uint8_t quantize_value(double v, const std::array<double, 3>& cutoffs);
QuantizedVector quantize(const FeatureVector& fv, const PercentileTable& table);

// The published cutoffs for window lengths 1..5 s, verbatim (including the
// 1 s table's ratio rows, which repeat its V2..V7 rows).
const PercentileTable& builtin_table(int window_s);

// builtin_table with the 1 s ratio-variable rows (V2_8..V7_13) replaced by
// cutoffs recomputed from training rows; other lengths pass through verbatim.
PercentileTable builtin_table_repaired(int window_s,
                                       const std::vector<FeatureVector>& rows);

}  // namespace neptune
