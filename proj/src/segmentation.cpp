#include "segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace neptune {

namespace {

// Weighted view of the input: sorted distinct values with multiplicities,
// plus each distinct value's run [start, start+count) in the sorted order.
struct DistinctValues {
  std::vector<double> x;
  std::vector<int64_t> w;
  std::vector<int64_t> run_start;     // into the sorted element order
  std::vector<int32_t> sorted_index;  // original index per sorted element
};

DistinctValues compress(std::span<const double> values) {
  std::vector<int32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    return values[static_cast<size_t>(a)] < values[static_cast<size_t>(b)];
  });
  DistinctValues d;
  d.sorted_index = std::move(order);
  for (size_t i = 0; i < d.sorted_index.size();) {
    double v = values[static_cast<size_t>(d.sorted_index[i])];
    size_t j = i;
    while (j < d.sorted_index.size() &&
           values[static_cast<size_t>(d.sorted_index[j])] == v) {
      ++j;
    }
    d.x.push_back(v);
    d.w.push_back(static_cast<int64_t>(j - i));
    d.run_start.push_back(static_cast<int64_t>(i));
    i = j;
  }
  return d;
}

// Prefix sums over the weighted distinct values; cost(i,j) is the SSE of
// assigning distinct values i..j (inclusive) to their mean.
struct IntervalCost {
  std::vector<double> w, wx, wx2;

  explicit IntervalCost(const DistinctValues& d) {
    size_t n = d.x.size();
    w.assign(n + 1, 0.0);
    wx.assign(n + 1, 0.0);
    wx2.assign(n + 1, 0.0);
    for (size_t i = 0; i < n; ++i) {
      double wi = static_cast<double>(d.w[i]);
      w[i + 1] = w[i] + wi;
      wx[i + 1] = wx[i] + wi * d.x[i];
      wx2[i + 1] = wx2[i] + wi * d.x[i] * d.x[i];
    }
  }

  double operator()(int64_t i, int64_t j) const {
    double ww = w[static_cast<size_t>(j + 1)] - w[static_cast<size_t>(i)];
    double sx = wx[static_cast<size_t>(j + 1)] - wx[static_cast<size_t>(i)];
    double sxx = wx2[static_cast<size_t>(j + 1)] - wx2[static_cast<size_t>(i)];
    double sse = sxx - sx * sx / ww;
    return sse > 0.0 ? sse : 0.0;
  }

  double mean(int64_t i, int64_t j) const {
    double ww = w[static_cast<size_t>(j + 1)] - w[static_cast<size_t>(i)];
    double sx = wx[static_cast<size_t>(j + 1)] - wx[static_cast<size_t>(i)];
    return sx / ww;
  }
};

// One DP layer, divide and conquer over the monotone argmin (the interval SSE
// cost satisfies the quadrangle inequality, so optimal split positions are
// non-decreasing in j). Ties take the smallest split for determinism.
void solve_layer(const IntervalCost& cost, const std::vector<double>& prev,
                 std::vector<double>& cur, std::vector<int32_t>& split,
                 int layer, int64_t jlo, int64_t jhi, int64_t slo,
                 int64_t shi) {
  if (jlo > jhi) return;
  int64_t jmid = jlo + (jhi - jlo) / 2;
  double best = std::numeric_limits<double>::infinity();
  int64_t best_s = -1;
  int64_t s_begin = std::max<int64_t>(slo, layer - 1);
  int64_t s_end = std::min(shi, jmid);
  for (int64_t s = s_begin; s <= s_end; ++s) {
    double v = prev[static_cast<size_t>(s - 1)] + cost(s, jmid);
    if (v < best) {
      best = v;
      best_s = s;
    }
  }
  cur[static_cast<size_t>(jmid)] = best;
  split[static_cast<size_t>(jmid)] = static_cast<int32_t>(best_s);
  solve_layer(cost, prev, cur, split, layer, jlo, jmid - 1, slo, best_s);
  solve_layer(cost, prev, cur, split, layer, jmid + 1, jhi, best_s, shi);
}

// Optimal contiguous k-partition of the distinct values; returns the k-1 cut
// positions (first distinct index of clusters 1..k-1).
std::vector<int64_t> optimal_cuts(const DistinctValues& d,
                                  const IntervalCost& cost, int k) {
  int64_t n = static_cast<int64_t>(d.x.size());
  std::vector<double> prev(static_cast<size_t>(n)), cur(static_cast<size_t>(n));
  std::vector<std::vector<int32_t>> splits(
      static_cast<size_t>(k), std::vector<int32_t>(static_cast<size_t>(n), 0));
  for (int64_t j = 0; j < n; ++j) prev[static_cast<size_t>(j)] = cost(0, j);
  for (int layer = 2; layer <= k; ++layer) {
    solve_layer(cost, prev, cur, splits[static_cast<size_t>(layer - 1)], layer,
                layer - 1, n - 1, layer - 1, n - 1);
    std::swap(prev, cur);
  }
  std::vector<int64_t> cuts(static_cast<size_t>(k - 1));
  int64_t j = n - 1;
  for (int layer = k; layer >= 2; --layer) {
    int64_t s = splits[static_cast<size_t>(layer - 1)][static_cast<size_t>(j)];
    cuts[static_cast<size_t>(layer - 2)] = s;
    j = s - 1;
  }
  return cuts;
}

struct Intervals {
  // begin[c]..begin[c+1]-1 are the distinct indices of cluster c.
  std::vector<int64_t> begin;  // size k+1, begin[0]=0, begin[k]=D
};

double intervals_sse(const IntervalCost& cost, const Intervals& iv, int k) {
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    if (iv.begin[static_cast<size_t>(c)] < iv.begin[static_cast<size_t>(c + 1)]) {
      total += cost(iv.begin[static_cast<size_t>(c)],
                    iv.begin[static_cast<size_t>(c + 1)] - 1);
    }
  }
  return total;
}

}  // namespace

std::optional<ClusterAssignment> kmeans_1d(std::span<const double> values,
                                           int k, int max_iters) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (values.size() < static_cast<size_t>(k)) {
    throw std::invalid_argument("need at least k values");
  }
  DistinctValues d = compress(values);
  int64_t D = static_cast<int64_t>(d.x.size());
  if (D < k) return std::nullopt;  // degenerate input

  IntervalCost cost(d);
  std::vector<int64_t> cuts = optimal_cuts(d, cost, k);

  Intervals iv;
  iv.begin.assign(static_cast<size_t>(k + 1), 0);
  for (int c = 1; c < k; ++c) iv.begin[static_cast<size_t>(c)] = cuts[static_cast<size_t>(c - 1)];
  iv.begin[static_cast<size_t>(k)] = D;

  std::vector<double> centroids(static_cast<size_t>(k));
  auto refresh_centroids = [&] {
    for (int c = 0; c < k; ++c) {
      centroids[static_cast<size_t>(c)] =
          cost.mean(iv.begin[static_cast<size_t>(c)], iv.begin[static_cast<size_t>(c + 1)] - 1);
    }
  };
  refresh_centroids();

  ClusterAssignment result;
  result.k = k;
  double prev_sse = intervals_sse(cost, iv, k);
  result.sse_trace.push_back(prev_sse);

  // Lloyd polish. Boundary value equidistant to two centroids goes to the
  // lower-centroid cluster, so each midpoint boundary is inclusive on the
  // left. From the DP optimum this loop converges immediately or after
  // shuffling tied boundary values.
  for (int iter = 0; iter < max_iters; ++iter) {
    Intervals next;
    next.begin.assign(static_cast<size_t>(k + 1), 0);
    next.begin[static_cast<size_t>(k)] = D;
    for (int c = 0; c + 1 < k; ++c) {
      double mid = 0.5 * (centroids[static_cast<size_t>(c)] + centroids[static_cast<size_t>(c + 1)]);
      // First distinct value strictly greater than the midpoint.
      auto it = std::upper_bound(d.x.begin(), d.x.end(), mid);
      int64_t cut = it - d.x.begin();
      if (cut < next.begin[static_cast<size_t>(c)]) cut = next.begin[static_cast<size_t>(c)];
      next.begin[static_cast<size_t>(c + 1)] = cut;
    }

    // Empty-cluster repair: reseed at the value farthest from its centroid.
    for (int guard = 0; guard < k; ++guard) {
      int empty = -1;
      for (int c = 0; c < k; ++c) {
        if (next.begin[static_cast<size_t>(c)] == next.begin[static_cast<size_t>(c + 1)]) {
          empty = c;
          break;
        }
      }
      if (empty < 0) break;
      double worst_gap = -1.0;
      double worst_value = d.x[0];
      for (int c = 0; c < k; ++c) {
        for (int64_t i = next.begin[static_cast<size_t>(c)]; i < next.begin[static_cast<size_t>(c + 1)]; ++i) {
          double gap = std::abs(d.x[static_cast<size_t>(i)] - centroids[static_cast<size_t>(c)]);
          if (gap > worst_gap) {
            worst_gap = gap;
            worst_value = d.x[static_cast<size_t>(i)];
          }
        }
      }
      centroids[static_cast<size_t>(empty)] = worst_value;
      std::sort(centroids.begin(), centroids.end());
      for (int c = 0; c + 1 < k; ++c) {
        double mid = 0.5 * (centroids[static_cast<size_t>(c)] + centroids[static_cast<size_t>(c + 1)]);
        auto it = std::upper_bound(d.x.begin(), d.x.end(), mid);
        int64_t cut = it - d.x.begin();
        if (cut < next.begin[static_cast<size_t>(c)]) cut = next.begin[static_cast<size_t>(c)];
        next.begin[static_cast<size_t>(c + 1)] = cut;
      }
    }

    bool stable = next.begin == iv.begin;
    iv = next;
    refresh_centroids();
    double sse = intervals_sse(cost, iv, k);
    result.sse_trace.push_back(sse);
    if (sse > prev_sse + 1e-9 * (1.0 + prev_sse)) {
      throw std::logic_error("k-means SSE increased across a Lloyd iteration");
    }
    prev_sse = sse;
    if (stable) break;
  }

  result.centroids = centroids;
  result.sse = prev_sse;
  result.sizes.assign(static_cast<size_t>(k), 0);
  result.labels.assign(values.size(), 0);
  for (int c = 0; c < k; ++c) {
    for (int64_t i = iv.begin[static_cast<size_t>(c)]; i < iv.begin[static_cast<size_t>(c + 1)]; ++i) {
      int64_t start = d.run_start[static_cast<size_t>(i)];
      int64_t count = d.w[static_cast<size_t>(i)];
      result.sizes[static_cast<size_t>(c)] += count;
      for (int64_t e = start; e < start + count; ++e) {
        result.labels[static_cast<size_t>(d.sorted_index[static_cast<size_t>(e)])] =
            static_cast<uint8_t>(c);
      }
    }
  }
  return result;
}

std::vector<int> exclude_largest(const ClusterAssignment& assign) {
  int largest = 0;
  for (int c = 1; c < assign.k; ++c) {
    int64_t size = assign.sizes[static_cast<size_t>(c)];
    int64_t best = assign.sizes[static_cast<size_t>(largest)];
    // Centroids ascend with the cluster id, so on a size tie the higher id is
    // the higher-centroid cluster and is the one excluded.
    if (size > best || (size == best && c > largest)) largest = c;
  }
  std::vector<int> retained;
  for (int c = 0; c < assign.k; ++c) {
    if (c != largest) retained.push_back(c);
  }
  return retained;
}

Adjacency adjacency_from_string(const std::string& s) {
  if (s == "four") return Adjacency::four;
  if (s == "eight") return Adjacency::eight;
  throw ParseError("unknown adjacency: " + s);
}

std::string to_string(Adjacency adjacency) {
  return adjacency == Adjacency::four ? "four" : "eight";
}

std::vector<Segment> connected_segments(int width, int height,
                                        std::span<const uint8_t> labels,
                                        std::span<const int> retained,
                                        Adjacency adjacency) {
  const size_t npix = static_cast<size_t>(width) * height;
  if (labels.size() != npix) throw std::invalid_argument("label grid size mismatch");
  std::vector<bool> keep(256, false);
  for (int c : retained) keep[static_cast<size_t>(c)] = true;

  std::vector<bool> visited(npix, false);
  std::vector<Segment> segments;
  std::vector<int32_t> stack;

  for (size_t seed = 0; seed < npix; ++seed) {
    if (visited[seed] || !keep[labels[seed]]) continue;
    uint8_t cluster = labels[seed];
    Segment seg;
    seg.cluster_id = cluster;
    seg.grid_width = width;
    stack.clear();
    stack.push_back(static_cast<int32_t>(seed));
    visited[seed] = true;
    while (!stack.empty()) {
      int32_t idx = stack.back();
      stack.pop_back();
      seg.pixels.push_back(idx);
      int x = idx % width;  // 0-based here
      int y = idx / width;
      auto try_push = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= width || ny >= height) return;
        size_t nidx = static_cast<size_t>(ny) * width + nx;
        if (!visited[nidx] && labels[nidx] == cluster) {
          visited[nidx] = true;
          stack.push_back(static_cast<int32_t>(nidx));
        }
      };
      try_push(x - 1, y);
      try_push(x + 1, y);
      try_push(x, y - 1);
      try_push(x, y + 1);
      if (adjacency == Adjacency::eight) {
        try_push(x - 1, y - 1);
        try_push(x + 1, y - 1);
        try_push(x - 1, y + 1);
        try_push(x + 1, y + 1);
      }
    }
    std::sort(seg.pixels.begin(), seg.pixels.end());
    seg.min_x = width;
    seg.min_y = height;
    seg.max_x = 1;
    seg.max_y = 1;
    double sum_x = 0.0, sum_y = 0.0;
    for (int32_t idx : seg.pixels) {
      int x = idx % width + 1;
      int y = idx / width + 1;
      seg.min_x = std::min(seg.min_x, x);
      seg.max_x = std::max(seg.max_x, x);
      seg.min_y = std::min(seg.min_y, y);
      seg.max_y = std::max(seg.max_y, y);
      sum_x += x;
      sum_y += y;
    }
    seg.centroid_x = sum_x / static_cast<double>(seg.pixels.size());
    seg.centroid_y = sum_y / static_cast<double>(seg.pixels.size());
    segments.push_back(std::move(seg));
  }

  std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
    if (a.min_y != b.min_y) return a.min_y < b.min_y;
    if (a.min_x != b.min_x) return a.min_x < b.min_x;
    return a.pixels.front() < b.pixels.front();
  });
  for (size_t i = 0; i < segments.size(); ++i) segments[i].id = static_cast<int>(i);
  return segments;
}

WindowSegmentation extract_sa_sb(const MergedMatrix& matrix,
                                 Adjacency adjacency) {
  WindowSegmentation out;
  if (matrix.no_signal) {
    out.no_signal = true;
    return out;
  }
  out.clusters3 = kmeans_1d(matrix.values, 3);
  out.clusters4 = kmeans_1d(matrix.values, 4);
  if (!out.clusters3 || !out.clusters4) {
    out.no_signal = true;
    out.clusters3.reset();
    out.clusters4.reset();
    return out;
  }
  out.retained3 = exclude_largest(*out.clusters3);
  out.retained4 = exclude_largest(*out.clusters4);
  out.sa = connected_segments(matrix.width, matrix.height, out.clusters3->labels,
                              out.retained3, adjacency);
  out.sb = connected_segments(matrix.width, matrix.height, out.clusters4->labels,
                              out.retained4, adjacency);
  return out;
}

GrayImage segment_map(const MergedMatrix& matrix,
                      const WindowSegmentation& seg) {
  GrayImage img;
  img.width = matrix.width;
  img.height = matrix.height;
  img.data.assign(static_cast<size_t>(matrix.width) * matrix.height, 255);
  if (!seg.clusters3) return img;
  // Retained clusters darken with the cluster id; the excluded (water)
  // cluster stays white.
  std::vector<uint8_t> shade(static_cast<size_t>(seg.clusters3->k), 255);
  const uint8_t shades[] = {160, 80, 0};
  for (size_t i = 0; i < seg.retained3.size() && i < 3; ++i) {
    shade[static_cast<size_t>(seg.retained3[i])] = shades[i];
  }
  for (size_t i = 0; i < img.data.size(); ++i) {
    img.data[i] = shade[seg.clusters3->labels[i]];
  }
  return img;
}

std::string segments_to_csv(const WindowSegmentation& seg) {
  std::ostringstream out;
  out << "set,id,cluster,pixel_count,min_x,min_y,max_x,max_y\n";
  auto emit = [&](const char* name, const std::vector<Segment>& list) {
    for (const Segment& s : list) {
      out << name << ',' << s.id << ',' << s.cluster_id << ',' << s.pixel_count()
          << ',' << s.min_x << ',' << s.min_y << ',' << s.max_x << ',' << s.max_y
          << '\n';
    }
  };
  emit("sa", seg.sa);
  emit("sb", seg.sb);
  return out.str();
}

}  // namespace neptune
