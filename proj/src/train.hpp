// End-to-end training: windows -> merged matrices -> segments -> labeled
// features -> percentile tables -> quantized rows -> rule mining, for every
// window length 1..5 s.
#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "model_io.hpp"
#include "synth.hpp"

namespace neptune {

struct WindowFeatures {
  int64_t start_frame = 0;
  int window_s = 0;
  bool positive_window = false;
  bool undetectable_positive = false;  // positive window without a labelable row
  std::vector<FeatureVector> rows;     // one per {S_a} segment, v1 filled in
};

struct LengthTrainData {
  int window_s = 0;
  std::vector<WindowFeatures> windows;
  std::vector<FeatureVector> all_rows;  // concatenated in window order
  int64_t positive_windows = 0;
  int64_t negative_windows = 0;
  int64_t undetectable_positives = 0;
};

// Steps 1-8 for one window length (windows processed in parallel).
LengthTrainData build_length_data(std::span<const GrayImage> frames,
                                  const std::vector<LabelRange>& labels,
                                  const RunConfig& cfg, int window_s);

// Percentile table per the configured source, then per-row quantization.
PercentileTable length_percentiles(const LengthTrainData& data,
                                   const RunConfig& cfg);
LabeledDataset build_labeled_dataset(const LengthTrainData& data,
                                     const PercentileTable& table);

struct LengthSummary {
  int window_s = 0;
  int64_t positive_windows = 0;
  int64_t negative_windows = 0;
  int64_t positive_rows = 0;
  int64_t negative_rows = 0;
  int64_t undetectable_positives = 0;
  int selected_num_variables = 0;  // 0 when no rules exist
  bool empty_ruleset = false;
  std::vector<SweepEntry> sweep;
};

struct TrainOutput {
  DetectorModel model;
  std::array<LengthSummary, 5> summaries;
};

// Trains all five window lengths. Throws TrainingError when a length has no
// positive window; a length where confidence-1 rules do not exist gets an
// empty ruleset and empty_ruleset = true (the caller may warn).
TrainOutput train(std::span<const GrayImage> frames,
                  const std::vector<LabelRange>& labels, const RunConfig& cfg);

std::string summaries_to_csv(const std::array<LengthSummary, 5>& summaries);

struct BaselineReport {
  std::string csv;  // start_frame,segment_id,actual,predicted
  double pearson = 0.0;
  int64_t rows = 0;
};

// Fixed baseline formula evaluated on every segment of one window length;
// throws when the correlation is undefined (zero variance on either side).
BaselineReport baseline_report(std::span<const GrayImage> frames,
                               const std::vector<LabelRange>& labels,
                               const RunConfig& cfg, int window_s);

}  // namespace neptune
