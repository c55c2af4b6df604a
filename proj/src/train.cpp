#include "train.hpp"

#include <sstream>

namespace neptune {

LengthTrainData build_length_data(std::span<const GrayImage> frames,
                                  const std::vector<LabelRange>& labels,
                                  const RunConfig& cfg, int window_s) {
  require_fps(cfg);
  LengthTrainData data;
  data.window_s = window_s;
  std::vector<FrameWindow> windows =
      partition_windows(frames, cfg.fps, window_s, cfg.stride_s);
  data.windows.assign(windows.size(), WindowFeatures{});

  parallel_for(static_cast<int64_t>(windows.size()), [&](int64_t i) {
    const FrameWindow& window = windows[static_cast<size_t>(i)];
    WindowFeatures& out = data.windows[static_cast<size_t>(i)];
    out.start_frame = window.start_frame;
    out.window_s = window_s;

    std::optional<TruthBox> truth = window_truth(
        labels, window.start_frame, static_cast<int64_t>(window.frames.size()));
    out.positive_window = truth.has_value();

    MergedMatrix merged = merge_window(window, cfg.dc_policy);
    WindowSegmentation seg = extract_sa_sb(merged, cfg.adjacency);
    out.rows = extract_features(seg.sa, seg.sb, merged);
    if (!out.rows.empty()) {
      std::vector<int> v1 = label_positive(seg.sa, truth);
      // rows are 1:1 with {S_a} when extraction succeeded
      for (size_t r = 0; r < out.rows.size(); ++r) {
        out.rows[r].v1 = v1[static_cast<size_t>(out.rows[r].segment_id)];
      }
    }
    if (out.positive_window) {
      bool has_positive_row = false;
      for (const FeatureVector& fv : out.rows) has_positive_row |= fv.v1 == 1;
      out.undetectable_positive = !has_positive_row;
    }
  });

  for (const WindowFeatures& w : data.windows) {
    data.positive_windows += w.positive_window ? 1 : 0;
    data.negative_windows += w.positive_window ? 0 : 1;
    data.undetectable_positives += w.undetectable_positive ? 1 : 0;
    data.all_rows.insert(data.all_rows.end(), w.rows.begin(), w.rows.end());
  }
  return data;
}

PercentileTable length_percentiles(const LengthTrainData& data,
                                   const RunConfig& cfg) {
  switch (cfg.percentile_source) {
    case PercentileSource::builtin:
      return builtin_table(data.window_s);
    case PercentileSource::builtin_repaired:
      return builtin_table_repaired(data.window_s, data.all_rows);
    case PercentileSource::computed:
      break;
  }
  if (data.all_rows.size() < 4) {
    throw TrainingError("window length " + std::to_string(data.window_s) +
                        " s produced only " + std::to_string(data.all_rows.size()) +
                        " segments; need >= 4 to compute percentiles");
  }
  return compute_percentiles(data.all_rows, data.window_s);
}

LabeledDataset build_labeled_dataset(const LengthTrainData& data,
                                     const PercentileTable& table) {
  LabeledDataset set;
  set.window_s = data.window_s;
  set.rows.reserve(data.all_rows.size());
  for (const FeatureVector& fv : data.all_rows) {
    set.rows.push_back(quantize(fv, table));
  }
  return set;
}

TrainOutput train(std::span<const GrayImage> frames,
                  const std::vector<LabelRange>& labels,
                  const RunConfig& cfg) {
  require_fps(cfg);
  TrainOutput out;
  out.model.settings = cfg.settings();
  out.model.percentile_source = to_string(cfg.percentile_source);

  for (int m = 1; m <= 5; ++m) {
    LengthTrainData data = build_length_data(frames, labels, cfg, m);
    LengthSummary& summary = out.summaries[static_cast<size_t>(m - 1)];
    summary.window_s = m;
    summary.positive_windows = data.positive_windows;
    summary.negative_windows = data.negative_windows;
    summary.undetectable_positives = data.undetectable_positives;

    if (data.positive_windows == 0) {
      throw TrainingError("no positive windows at " + std::to_string(m) +
                          " s; training needs at least one labeled struggle");
    }

    PercentileTable table = length_percentiles(data, cfg);
    LabeledDataset dataset = build_labeled_dataset(data, table);
    summary.positive_rows = dataset.positives();
    summary.negative_rows = dataset.negatives();

    ModelEntry& entry = out.model.entry(m);
    entry.table = table;
    entry.positive_windows = data.positive_windows;
    entry.negative_windows = data.negative_windows;
    entry.ruleset.window_s = m;

    if (dataset.positives() == 0) {
      // Every positive window was undetectable; nothing to mine.
      summary.empty_ruleset = true;
      continue;
    }
    summary.sweep = sweep_rulesets(dataset);
    try {
      int num_variables = select_final_num_variables(summary.sweep);
      entry.ruleset = materialize_ruleset(dataset, num_variables);
      summary.selected_num_variables = num_variables;
    } catch (const TrainingError&) {
      summary.empty_ruleset = true;  // confidence 1 unattainable at any size
    }
  }
  return out;
}

std::string summaries_to_csv(const std::array<LengthSummary, 5>& summaries) {
  std::ostringstream out;
  out << "window_s,num_variables,rule_count,total_positives_covered,"
         "multi_positive_rules,proportion_multi_positive,selected\n";
  for (const LengthSummary& s : summaries) {
    for (const SweepEntry& e : s.sweep) {
      double proportion = e.rule_count == 0
                              ? 0.0
                              : static_cast<double>(e.multi_positive_rules) /
                                    static_cast<double>(e.rule_count);
      out << e.window_s << ',' << e.num_variables << ',' << e.rule_count << ','
          << e.total_positives_covered << ',' << e.multi_positive_rules << ','
          << format_double(proportion) << ','
          << (e.num_variables == s.selected_num_variables ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

BaselineReport baseline_report(std::span<const GrayImage> frames,
                               const std::vector<LabelRange>& labels,
                               const RunConfig& cfg, int window_s) {
  LengthTrainData data = build_length_data(frames, labels, cfg, window_s);
  const BaselineFormula& formula = builtin_formula(window_s);

  BaselineReport report;
  std::ostringstream csv;
  csv << "start_frame,segment_id,actual,predicted\n";
  std::vector<double> actual, predicted;
  for (const WindowFeatures& w : data.windows) {
    for (const FeatureVector& fv : w.rows) {
      double score = eval_baseline(formula, fv);
      actual.push_back(fv.v1);
      predicted.push_back(score);
      csv << w.start_frame << ',' << fv.segment_id << ',' << fv.v1 << ','
          << format_double(score) << '\n';
    }
  }
  report.rows = static_cast<int64_t>(actual.size());
  report.pearson = pearson(actual, predicted);  // throws on zero variance
  report.csv = csv.str();
  return report;
}

}  // namespace neptune
