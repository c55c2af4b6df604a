#include "detect.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "util.hpp"

namespace neptune {

const ModelEntry& DetectorModel::entry(int window_s) const {
  if (window_s < 1 || window_s > 5) {
    throw std::invalid_argument("window length must be 1..5 s");
  }
  return entries[static_cast<size_t>(window_s - 1)];
}

ModelEntry& DetectorModel::entry(int window_s) {
  if (window_s < 1 || window_s > 5) {
    throw std::invalid_argument("window length must be 1..5 s");
  }
  return entries[static_cast<size_t>(window_s - 1)];
}

WindowDetection detect_window(const DetectorModel& model,
                              const FrameWindow& window) {
  const ModelEntry& entry = model.entry(window.duration_s);
  WindowDetection result;
  MergedMatrix merged = merge_window(window, model.settings.dc_policy);
  WindowSegmentation seg = extract_sa_sb(merged, model.settings.adjacency);
  std::vector<FeatureVector> rows = extract_features(seg.sa, seg.sb, merged);
  for (const FeatureVector& fv : rows) {
    QuantizedVector qv = quantize(fv, entry.table);
    if (apply_rules(entry.ruleset, qv)) {
      result.segment_ids.push_back(fv.segment_id);
    }
  }
  result.detected = !result.segment_ids.empty();
  return result;
}

DetectionTimeline detect_stream(const DetectorModel& model,
                                std::span<const GrayImage> frames, int fps) {
  if (fps < 1) throw std::invalid_argument("fps must be >= 1");
  int seconds = static_cast<int>(frames.size() / static_cast<size_t>(fps));
  if (seconds < 5) {
    throw std::invalid_argument("stream must cover at least 5 s, got " +
                                std::to_string(seconds));
  }

  DetectionTimeline timeline;
  timeline.seconds = seconds;
  for (int m = 1; m <= 5; ++m) {
    timeline.detected[static_cast<size_t>(m - 1)].assign(static_cast<size_t>(seconds), -1);
    timeline.segment_ids[static_cast<size_t>(m - 1)].resize(static_cast<size_t>(seconds));
  }
  timeline.union_detected.assign(static_cast<size_t>(seconds), 0);

  struct Task {
    int t, m;
  };
  std::vector<Task> tasks;
  for (int t = 1; t <= seconds; ++t) {
    for (int m = 1; m <= 5 && m <= t; ++m) tasks.push_back({t, m});
  }

  parallel_for(static_cast<int64_t>(tasks.size()), [&](int64_t i) {
    const Task& task = tasks[static_cast<size_t>(i)];
    FrameWindow window;
    size_t start = static_cast<size_t>(task.t - task.m) * static_cast<size_t>(fps);
    window.frames = frames.subspan(start, static_cast<size_t>(task.m) * fps);
    window.fps = fps;
    window.duration_s = task.m;
    window.start_frame = static_cast<int64_t>(start) + 1;
    WindowDetection det = detect_window(model, window);
    timeline.detected[static_cast<size_t>(task.m - 1)][static_cast<size_t>(task.t - 1)] =
        det.detected ? 1 : 0;
    timeline.segment_ids[static_cast<size_t>(task.m - 1)][static_cast<size_t>(task.t - 1)] =
        std::move(det.segment_ids);
  });

  for (int t = 1; t <= seconds; ++t) {
    uint8_t any = 0;
    for (int m = 1; m <= 5; ++m) {
      if (timeline.detected[static_cast<size_t>(m - 1)][static_cast<size_t>(t - 1)] == 1) any = 1;
    }
    timeline.union_detected[static_cast<size_t>(t - 1)] = any;
  }
  return timeline;
}

std::string timeline_to_csv(const DetectionTimeline& timeline) {
  std::ostringstream out;
  out << "second,window_s,detected,segment_ids\n";
  for (int t = 1; t <= timeline.seconds; ++t) {
    for (int m = 1; m <= 5; ++m) {
      int8_t d = timeline.detected[static_cast<size_t>(m - 1)][static_cast<size_t>(t - 1)];
      if (d < 0) continue;
      out << t << ',' << m << ',' << static_cast<int>(d) << ',';
      const auto& ids = timeline.segment_ids[static_cast<size_t>(m - 1)][static_cast<size_t>(t - 1)];
      for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out << ';';
        out << ids[i];
      }
      out << '\n';
    }
  }
  out << "\nsecond,union\n";
  for (int t = 1; t <= timeline.seconds; ++t) {
    out << t << ',' << static_cast<int>(timeline.union_detected[static_cast<size_t>(t - 1)])
        << '\n';
  }
  return out.str();
}

std::string timeline_to_svg(const DetectionTimeline& timeline) {
  // One row per window length plus a union row; a red mark means detection at
  // that second.
  const int cell = 12;
  const int left = 56;
  const int top = 24;
  const int row_h = 20;
  const int rows = 6;
  int width = left + timeline.seconds * cell + 16;
  int height = top + rows * row_h + 28;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"16\" font-family=\"sans-serif\" "
         "font-size=\"12\">detections per second</text>\n";

  auto row_label = [](int row) -> std::string {
    if (row < 5) return std::to_string(row + 1) + " s";
    return "union";
  };
  for (int row = 0; row < rows; ++row) {
    int y = top + row * row_h;
    svg << "<text x=\"8\" y=\"" << y + 14
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << row_label(row)
        << "</text>\n";
    for (int t = 1; t <= timeline.seconds; ++t) {
      bool on;
      bool evaluated;
      if (row < 5) {
        int8_t d = timeline.detected[static_cast<size_t>(row)][static_cast<size_t>(t - 1)];
        evaluated = d >= 0;
        on = d == 1;
      } else {
        evaluated = true;
        on = timeline.union_detected[static_cast<size_t>(t - 1)] != 0;
      }
      int x = left + (t - 1) * cell;
      const char* fill = on ? "#c80000" : (evaluated ? "#e8e8e8" : "#f8f8f8");
      svg << "<rect x=\"" << x << "\" y=\"" << y + 4 << "\" width=\"" << cell - 2
          << "\" height=\"" << row_h - 8 << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  int axis_y = top + rows * row_h + 16;
  for (int t = 5; t <= timeline.seconds; t += 5) {
    int x = left + (t - 1) * cell;
    svg << "<text x=\"" << x << "\" y=\"" << axis_y
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << t << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

BaselineFormula make_formula(int window_s, double intercept,
                             std::vector<std::pair<int, double>> terms) {
  BaselineFormula f;
  f.window_s = window_s;
  f.intercept = intercept;
  f.terms = std::move(terms);
  return f;
}

}  // namespace

const BaselineFormula& builtin_formula(int window_s) {
  static const std::array<BaselineFormula, 5> formulas = {
      // 1 s
      make_formula(1, 0.58134,
                   {{kV2, -0.2072},
                    {kV4, 0.01528},
                    {kV6, -0.1563},
                    {kV9, 0.000243},
                    {kV10, -0.01994},
                    {kV11, -2.9549},
                    {kV12, -7.4156},
                    {kV13, 7.6710},
                    {kV4_10, -0.004826}}),  // V16
      // 2 s
      make_formula(2, 0.03580,
                   {{kV4, 0.01665},
                    {kV6, -0.1753},
                    {kV8, -0.2300},
                    {kV9, 0.0002441},
                    {kV12, -7.6024},
                    {kV4_10, -0.005745}}),
      // 3 s
      make_formula(3, -0.09636,
                   {{kV2, -0.3232}, {kV3, 0.0001431}, {kV6, -0.1553}, {kV8, -0.2502}}),
      // 4 s
      make_formula(4, -0.00123, {{kV4, 0.01103}, {kV3_9, 0.00107}}),  // V15
      // 5 s
      make_formula(5, 0.1227,
                   {{kV2, -0.6882},
                    {kV6, 0.8153},
                    {kV7, -1.1143},
                    {kV9, -0.0003874},
                    {kV12, 13.0915},
                    {kV6_12, -0.001769},
                    {kV7_13, 0.002818}}),
  };
  if (window_s < 1 || window_s > 5) {
    throw std::invalid_argument("window length must be 1..5 s");
  }
  return formulas[static_cast<size_t>(window_s - 1)];
}

double eval_baseline(const BaselineFormula& formula, const FeatureVector& fv) {
  double score = formula.intercept;
  for (const auto& [var, coeff] : formula.terms) {
    score += coeff * fv[var];
  }
  return score;
}

double pearson(std::span<const double> actual,
               std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument("length mismatch");
  }
  size_t n = actual.size();
  if (n < 2) throw std::invalid_argument("need at least 2 points");
  double mean_a = 0.0, mean_p = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_a += actual[i];
    mean_p += predicted[i];
  }
  mean_a /= static_cast<double>(n);
  mean_p /= static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_p = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double da = actual[i] - mean_a;
    double dp = predicted[i] - mean_p;
    cov += da * dp;
    var_a += da * da;
    var_p += dp * dp;
  }
  if (var_a == 0.0 || var_p == 0.0) {
    throw std::invalid_argument("correlation undefined: zero variance");
  }
  return cov / std::sqrt(var_a * var_p);
}

}  // namespace neptune
