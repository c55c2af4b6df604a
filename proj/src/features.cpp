#include "features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace neptune {

const std::array<std::string, kNumVariables>& variable_names() {
  static const std::array<std::string, kNumVariables> names = {
      "V2",   "V3",   "V4",    "V5",    "V6",    "V7",
      "V8",   "V9",   "V10",   "V11",   "V12",   "V13",
      "V2_8", "V3_9", "V4_10", "V5_11", "V6_12", "V7_13"};
  return names;
}

int variable_index(const std::string& name) {
  const auto& names = variable_names();
  for (int i = 0; i < kNumVariables; ++i) {
    if (names[static_cast<size_t>(i)] == name) return i;
  }
  return -1;
}

std::array<std::pair<int, int>, 5> five_points(const Segment& seg) {
  int cx = static_cast<int>(round_half_up(seg.centroid_x));
  int cy = static_cast<int>(round_half_up(seg.centroid_y));
  return {{{seg.min_x, seg.min_y},
           {seg.min_x, seg.max_y},
           {seg.max_x, seg.min_y},
           {seg.max_x, seg.max_y},
           {cx, cy}}};
}

double five_point_std(const Segment& seg, const MergedMatrix& matrix) {
  auto points = five_points(seg);
  double mean = 0.0;
  for (const auto& [x, y] : points) mean += matrix.at(x, y);
  mean /= 5.0;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    double d = matrix.at(x, y) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / 5.0);
}

const Segment& nearest_sb(const Segment& seg_a,
                          const std::vector<Segment>& segments_b) {
  if (segments_b.empty()) {
    throw std::invalid_argument("no pairing possible: {S_b} is empty");
  }
  const Segment* best = &segments_b.front();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const Segment& b : segments_b) {
    double dx = b.centroid_x - seg_a.centroid_x;
    double dy = b.centroid_y - seg_a.centroid_y;
    double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {  // strict: ties keep the smaller id
      best_d2 = d2;
      best = &b;
    }
  }
  return *best;
}

namespace {

struct SideStats {
  std::vector<double> ratio;  // std/count per segment
  std::vector<double> count;
  std::vector<double> stddev;
  double sum_ratio = 0.0, sum_count = 0.0, sum_std = 0.0;
};

SideStats side_stats(const std::vector<Segment>& segments,
                     const MergedMatrix& matrix) {
  SideStats s;
  s.ratio.reserve(segments.size());
  s.count.reserve(segments.size());
  s.stddev.reserve(segments.size());
  for (const Segment& seg : segments) {
    double n = static_cast<double>(seg.pixel_count());
    double sd = five_point_std(seg, matrix);
    s.count.push_back(n);
    s.stddev.push_back(sd);
    s.ratio.push_back(sd / n);
    s.sum_count += n;
    s.sum_std += sd;
    s.sum_ratio += sd / n;
  }
  return s;
}

// share = value / sum; a zero sum (every std is zero) degrades to the uniform
// share 1/n so the shares still sum to 1.
double share(double value, double sum, size_t n) {
  if (sum == 0.0) return 1.0 / static_cast<double>(n);
  return value / sum;
}

double cross_ratio(double numerator, double denominator) {
  if (denominator == 0.0) return kMaxBinSentinel;
  return numerator / denominator;
}

}  // namespace

std::vector<FeatureVector> extract_features(const std::vector<Segment>& sa,
                                            const std::vector<Segment>& sb,
                                            const MergedMatrix& matrix) {
  std::vector<FeatureVector> rows;
  if (sa.empty() || sb.empty()) return rows;

  SideStats a = side_stats(sa, matrix);
  SideStats b = side_stats(sb, matrix);

  rows.reserve(sa.size());
  for (size_t i = 0; i < sa.size(); ++i) {
    FeatureVector fv;
    fv.segment_id = sa[i].id;
    const Segment& nb = nearest_sb(sa[i], sb);
    fv.nearest_sb_id = nb.id;
    size_t j = static_cast<size_t>(nb.id);

    fv.values[kV2] = a.ratio[i];
    fv.values[kV3] = a.count[i];
    fv.values[kV4] = a.stddev[i];
    fv.values[kV5] = share(a.ratio[i], a.sum_ratio, sa.size());
    fv.values[kV6] = share(a.count[i], a.sum_count, sa.size());
    fv.values[kV7] = share(a.stddev[i], a.sum_std, sa.size());

    fv.values[kV8] = b.ratio[j];
    fv.values[kV9] = b.count[j];
    fv.values[kV10] = b.stddev[j];
    fv.values[kV11] = share(b.ratio[j], b.sum_ratio, sb.size());
    fv.values[kV12] = share(b.count[j], b.sum_count, sb.size());
    fv.values[kV13] = share(b.stddev[j], b.sum_std, sb.size());

    fv.values[kV2_8] = cross_ratio(fv.values[kV2], fv.values[kV8]);
    fv.values[kV3_9] = cross_ratio(fv.values[kV3], fv.values[kV9]);
    fv.values[kV4_10] = cross_ratio(fv.values[kV4], fv.values[kV10]);
    fv.values[kV5_11] = cross_ratio(fv.values[kV5], fv.values[kV11]);
    fv.values[kV6_12] = cross_ratio(fv.values[kV6], fv.values[kV12]);
    fv.values[kV7_13] = cross_ratio(fv.values[kV7], fv.values[kV13]);

    rows.push_back(fv);
  }
  return rows;
}

std::vector<int> label_positive(const std::vector<Segment>& sa,
                                const std::optional<TruthBox>& truth) {
  std::vector<int> labels(sa.size(), 0);
  if (!truth || sa.empty()) return labels;

  // Prefer the intersecting segment with the most pixels inside the box;
  // intersection-count ties keep the smaller id.
  int64_t best_inside = 0;
  size_t best = sa.size();
  for (size_t i = 0; i < sa.size(); ++i) {
    const Segment& seg = sa[i];
    if (seg.max_x < truth->min_x || seg.min_x > truth->max_x ||
        seg.max_y < truth->min_y || seg.min_y > truth->max_y) {
      continue;  // bboxes disjoint, so the pixel sets are too
    }
    int64_t inside = 0;
    for (size_t p = 0; p < seg.pixels.size(); ++p) {
      int x = seg.pixel_x(p);
      int y = seg.pixel_y(p);
      if (x >= truth->min_x && x <= truth->max_x && y >= truth->min_y &&
          y <= truth->max_y) {
        ++inside;
      }
    }
    if (inside > best_inside) {
      best_inside = inside;
      best = i;
    }
  }

  if (best == sa.size()) {
    // Nothing intersects: the segment nearest the box centre is positive.
    double cx = 0.5 * (truth->min_x + truth->max_x);
    double cy = 0.5 * (truth->min_y + truth->max_y);
    double best_d2 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < sa.size(); ++i) {
      double dx = sa[i].centroid_x - cx;
      double dy = sa[i].centroid_y - cy;
      double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
  }
  labels[best] = 1;
  return labels;
}

std::vector<LabelRange> load_labels(const std::string& path) {
  std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::vector<LabelRange> ranges;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    std::istringstream row(line);
    std::string field;
    std::vector<int64_t> nums;
    while (std::getline(row, field, ',')) {
      try {
        nums.push_back(std::stoll(field));
      } catch (const std::logic_error&) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" + field + "'");
      }
    }
    if (nums.size() != 6) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": want 6 fields, got " +
                       std::to_string(nums.size()));
    }
    LabelRange r;
    r.start_frame = nums[0];
    r.end_frame = nums[1];
    r.box = TruthBox{static_cast<int>(nums[2]), static_cast<int>(nums[3]),
                     static_cast<int>(nums[4]), static_cast<int>(nums[5])};
    if (r.start_frame < 1 || r.end_frame < r.start_frame) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad frame range");
    }
    ranges.push_back(r);
  }
  return ranges;
}

std::string labels_to_csv(const std::vector<LabelRange>& ranges) {
  std::ostringstream out;
  out << "start_frame,end_frame,min_x,min_y,max_x,max_y\n";
  for (const LabelRange& r : ranges) {
    out << r.start_frame << ',' << r.end_frame << ',' << r.box.min_x << ','
        << r.box.min_y << ',' << r.box.max_x << ',' << r.box.max_y << '\n';
  }
  return out.str();
}

std::optional<TruthBox> window_truth(const std::vector<LabelRange>& ranges,
                                     int64_t start_frame, int64_t frame_count) {
  int64_t end_frame = start_frame + frame_count - 1;
  int64_t centre = start_frame + (frame_count - 1) / 2;
  const LabelRange* centre_hit = nullptr;
  const LabelRange* longest = nullptr;
  int64_t longest_overlap = 0;
  for (const LabelRange& r : ranges) {
    int64_t lo = std::max(start_frame, r.start_frame);
    int64_t hi = std::min(end_frame, r.end_frame);
    if (lo > hi) continue;
    if (!centre_hit && centre >= r.start_frame && centre <= r.end_frame) {
      centre_hit = &r;
    }
    int64_t overlap = hi - lo + 1;
    if (overlap > longest_overlap) {
      longest_overlap = overlap;
      longest = &r;
    }
  }
  if (centre_hit) return centre_hit->box;
  if (longest) return longest->box;
  return std::nullopt;
}

}  // namespace neptune
