// Multi-window detection over frame streams, and the fixed linear baseline
// formulas used for correlation reports.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rules.hpp"

namespace neptune {

struct PipelineSettings {
  DcPolicy dc_policy = DcPolicy::exclude_dc;
  Adjacency adjacency = Adjacency::four;
  // Fixed conventions, recorded in the model file for provenance.
  static constexpr const char* kStdConvention = "population";
  static constexpr const char* kPercentileMethod = "linear_interpolation";
  static constexpr const char* kLargestTie = "higher_centroid";
};

struct ModelEntry {
  PercentileTable table;
  RuleSet ruleset;
  int64_t positive_windows = 0;  // training counts, kept for reporting
  int64_t negative_windows = 0;
};

struct DetectorModel {
  int version = 1;
  PipelineSettings settings;
  std::string percentile_source = "computed";
  std::array<ModelEntry, 5> entries;  // window lengths 1..5 s

  const ModelEntry& entry(int window_s) const;
  ModelEntry& entry(int window_s);
};

struct WindowDetection {
  bool detected = false;
  std::vector<int> segment_ids;  // {S_a} ids whose quantized row matched
};

// merge -> segment -> features -> quantize (against the model's stored table)
// -> rules, for one window. A no-signal window is (false, {}).
WindowDetection detect_window(const DetectorModel& model,
                              const FrameWindow& window);

struct DetectionTimeline {
  int seconds = 0;
  // [m-1][t-1]: 1/0 once the window ending at second t exists (t >= m),
  // -1 before that.
  std::array<std::vector<int8_t>, 5> detected;
  std::array<std::vector<std::vector<int>>, 5> segment_ids;
  std::vector<uint8_t> union_detected;  // OR across window lengths, per second
};

// Evaluates the window of each length m ending at every integer second t >= m
// (frames (t-m)*fps+1 .. t*fps, so no lookahead past t). Stream must cover at
// least 5 s. Window evaluations run in parallel; assembly order is fixed.
DetectionTimeline detect_stream(const DetectorModel& model,
                                std::span<const GrayImage> frames, int fps);

std::string timeline_to_csv(const DetectionTimeline& timeline);
std::string timeline_to_svg(const DetectionTimeline& timeline);

struct BaselineFormula {
  int window_s = 0;
  double intercept = 0.0;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
};

// The published regression formula for each window length. V14..V19 in the
// source formulas alias the six ratio variables in table order.
const BaselineFormula& builtin_formula(int window_s);

double eval_baseline(const BaselineFormula& formula, const FeatureVector& fv);

// Pearson product-moment correlation; throws when either side has zero
// variance (or fewer than 2 points).
double pearson(std::span<const double> actual, std::span<const double> predicted);

}  // namespace neptune
