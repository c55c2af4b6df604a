// The 18 per-segment variables: V2-V7 from a segment in {S_a}, V8-V13 from
// its nearest {S_b} segment, and the six cross ratios.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segmentation.hpp"

namespace neptune {

// Canonical variable order, used everywhere (tables, rules, model file).
inline constexpr int kNumVariables = 18;
enum VariableIndex : int {
  kV2 = 0, kV3, kV4, kV5, kV6, kV7,
  kV8, kV9, kV10, kV11, kV12, kV13,
  kV2_8, kV3_9, kV4_10, kV5_11, kV6_12, kV7_13,
};
const std::array<std::string, kNumVariables>& variable_names();
int variable_index(const std::string& name);  // -1 if unknown

// A ratio with zero denominator (a zero-variation partner segment) takes this
// sentinel, which quantizes to the top bin against any percentile table.
inline constexpr double kMaxBinSentinel = 1e30;

struct FeatureVector {
  int segment_id = 0;     // id within the window's {S_a}
  int nearest_sb_id = 0;  // id within the window's {S_b}
  std::array<double, kNumVariables> values{};
  int v1 = 0;  // label; 0 for unlabeled/negative rows

  double operator[](int variable) const { return values[static_cast<size_t>(variable)]; }
};

// Bounding-box corners plus the rounded centroid ("centre"). Corners and the
// centre may fall outside the segment itself; all lie inside the grid.
std::array<std::pair<int, int>, 5> five_points(const Segment& seg);

// Population standard deviation (divide by 5) of the matrix values at the
// five points.
double five_point_std(const Segment& seg, const MergedMatrix& matrix);

// Nearest {S_b} segment by Euclidean centroid distance; ties take the smaller
// id. segments_b must be non-empty.
const Segment& nearest_sb(const Segment& seg_a,
                          const std::vector<Segment>& segments_b);

// One FeatureVector per {S_a} segment. Returns an empty list when {S_a} is
// empty or {S_b} is empty (no pairing possible).
std::vector<FeatureVector> extract_features(const std::vector<Segment>& sa,
                                            const std::vector<Segment>& sb,
                                            const MergedMatrix& matrix);

struct TruthBox {
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

// v1 per {S_a} segment. Without a truth box everything is 0. With one, the
// intersecting segment with the most pixels inside the box is positive; if
// none intersects, the segment whose centroid is nearest the box centre is.
// Exactly one positive when the box is present and {S_a} is non-empty.
std::vector<int> label_positive(const std::vector<Segment>& sa,
                                const std::optional<TruthBox>& truth);

struct LabelRange {
  int64_t start_frame = 0;  // 1-based, inclusive
  int64_t end_frame = 0;
  TruthBox box;
};

// CSV with header "start_frame,end_frame,min_x,min_y,max_x,max_y".
std::vector<LabelRange> load_labels(const std::string& path);
std::string labels_to_csv(const std::vector<LabelRange>& ranges);

// Truth box for a window spanning [start_frame, start_frame+frame_count-1]:
// none if no labeled range overlaps; with several overlaps, the row covering
// the window's centre frame wins, falling back to the longest overlap.
std::optional<TruthBox> window_truth(const std::vector<LabelRange>& ranges,
                                     int64_t start_frame, int64_t frame_count);

}  // namespace neptune
