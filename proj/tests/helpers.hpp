// Test-only oracles and fixtures. Everything here recomputes expected results
// through independent code paths (plain loops, exhaustive enumeration), so
// the implementations under test are never checked against themselves.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "features.hpp"
#include "quantize.hpp"
#include "rules.hpp"
#include "segmentation.hpp"
#include "spectral.hpp"
#include "synth.hpp"

namespace oracle {

// Naive O(L^2) DFT: max |X[k]| over the selected bins.
inline double naive_dft_max(const std::vector<double>& series, bool include_dc) {
  const size_t length = series.size();
  double best = 0.0;
  const double tau = 6.283185307179586476925286766559;
  for (size_t k = include_dc ? 0 : 1; k < length; ++k) {
    std::complex<double> sum(0.0, 0.0);
    for (size_t n = 0; n < length; ++n) {
      double angle = -tau * static_cast<double>(k) * static_cast<double>(n) /
                     static_cast<double>(length);
      sum += series[n] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    best = std::max(best, std::abs(sum));
  }
  return best;
}

// Exhaustive 1-D k-means: tries every contiguous partition of the sorted
// values (the 1-D optimum is contiguous) and returns the minimal SSE.
inline double exhaustive_kmeans_sse(std::vector<double> values, int k) {
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  auto interval_sse = [&](int lo, int hi) {  // inclusive
    double mean = 0.0;
    for (int i = lo; i <= hi; ++i) mean += values[static_cast<size_t>(i)];
    mean /= static_cast<double>(hi - lo + 1);
    double sse = 0.0;
    for (int i = lo; i <= hi; ++i) {
      double d = values[static_cast<size_t>(i)] - mean;
      sse += d * d;
    }
    return sse;
  };
  double best = std::numeric_limits<double>::infinity();
  // Choose k-1 cut positions 1 <= c1 < c2 < ... < c_{k-1} <= n-1.
  std::vector<int> cuts(static_cast<size_t>(k - 1));
  auto recurse = [&](auto&& self, int idx, int from) -> void {
    if (idx == k - 1) {
      double sse = 0.0;
      int lo = 0;
      for (int c = 0; c < k - 1; ++c) {
        sse += interval_sse(lo, cuts[static_cast<size_t>(c)] - 1);
        lo = cuts[static_cast<size_t>(c)];
      }
      sse += interval_sse(lo, n - 1);
      best = std::min(best, sse);
      return;
    }
    for (int c = from; c <= n - (k - 1 - idx); ++c) {
      cuts[static_cast<size_t>(idx)] = c;
      self(self, idx + 1, c + 1);
    }
  };
  recurse(recurse, 0, 1);
  return best;
}

// Independent connected-components labeling: repeated scanline flood fill
// from a frontier queue (vs. the implementation's DFS stack).
struct OracleComponent {
  int cluster = 0;
  std::vector<int32_t> pixels;  // sorted flat indices
};

inline std::vector<OracleComponent> flood_fill_components(
    int width, int height, const std::vector<uint8_t>& labels,
    const std::vector<int>& retained, bool eight) {
  std::vector<bool> keep(256, false);
  for (int c : retained) keep[static_cast<size_t>(c)] = true;
  std::vector<int> component(static_cast<size_t>(width) * height, -1);
  int next_id = 0;
  std::vector<int32_t> queue;
  for (int start = 0; start < width * height; ++start) {
    if (component[static_cast<size_t>(start)] >= 0 || !keep[labels[static_cast<size_t>(start)]]) {
      continue;
    }
    queue.clear();
    queue.push_back(start);
    component[static_cast<size_t>(start)] = next_id;
    for (size_t head = 0; head < queue.size(); ++head) {
      int idx = queue[head];
      int x = idx % width, y = idx / width;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!eight && dx != 0 && dy != 0) continue;
          int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
          int nidx = ny * width + nx;
          if (component[static_cast<size_t>(nidx)] < 0 &&
              labels[static_cast<size_t>(nidx)] == labels[static_cast<size_t>(idx)]) {
            component[static_cast<size_t>(nidx)] = next_id;
            queue.push_back(nidx);
          }
        }
      }
    }
    ++next_id;
  }
  std::vector<OracleComponent> components(static_cast<size_t>(next_id));
  for (int idx = 0; idx < width * height; ++idx) {
    int id = component[static_cast<size_t>(idx)];
    if (id < 0) continue;
    components[static_cast<size_t>(id)].cluster = labels[static_cast<size_t>(idx)];
    components[static_cast<size_t>(id)].pixels.push_back(idx);
  }
  for (auto& c : components) std::sort(c.pixels.begin(), c.pixels.end());
  return components;
}

// Exhaustive confidence-1 rule enumeration over all variable combinations and
// bin assignments; rows are matched by direct scanning.
struct OracleRule {
  std::vector<std::pair<int, int>> items;  // (variable, bin), variables ascending
  int64_t positives_covered = 0;

  bool operator<(const OracleRule& other) const { return items < other.items; }
};

inline std::vector<OracleRule> exhaustive_rules(
    const neptune::LabeledDataset& data, int size) {
  std::vector<OracleRule> out;
  const int nv = data.num_vars;
  std::vector<int> vars(static_cast<size_t>(size));
  std::vector<int> bins(static_cast<size_t>(size));

  auto matches = [&](const neptune::QuantizedVector& row) {
    for (int i = 0; i < size; ++i) {
      if (row.bins[static_cast<size_t>(vars[static_cast<size_t>(i)])] !=
          bins[static_cast<size_t>(i)]) {
        return false;
      }
    }
    return true;
  };

  auto try_bins = [&](auto&& self, int idx) -> void {
    if (idx == size) {
      int64_t covered = 0;
      bool clean = true;
      for (const auto& row : data.rows) {
        if (!matches(row)) continue;
        if (row.v1) {
          ++covered;
        } else {
          clean = false;
          break;
        }
      }
      if (clean && covered >= 1) {
        OracleRule rule;
        for (int i = 0; i < size; ++i) {
          rule.items.emplace_back(vars[static_cast<size_t>(i)], bins[static_cast<size_t>(i)]);
        }
        rule.positives_covered = covered;
        out.push_back(std::move(rule));
      }
      return;
    }
    for (int b = 1; b <= 4; ++b) {
      bins[static_cast<size_t>(idx)] = b;
      self(self, idx + 1);
    }
  };

  auto choose_vars = [&](auto&& self, int idx, int from) -> void {
    if (idx == size) {
      try_bins(try_bins, 0);
      return;
    }
    for (int v = from; v < nv; ++v) {
      vars[static_cast<size_t>(idx)] = v;
      self(self, idx + 1, v + 1);
    }
  };
  choose_vars(choose_vars, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<OracleRule> rules_to_oracle_form(const std::vector<neptune::Rule>& rules) {
  std::vector<OracleRule> out;
  for (const auto& rule : rules) {
    OracleRule o;
    for (int v = 0; v < neptune::kNumVariables; ++v) {
      if (rule.bins[static_cast<size_t>(v)] != 0) {
        o.items.emplace_back(v, rule.bins[static_cast<size_t>(v)]);
      }
    }
    o.positives_covered = rule.positives_covered;
    out.push_back(std::move(o));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Brute-force percentile: sort, then walk the interpolation rule directly.
inline double percentile_bruteforce(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double rank = (n - 1.0) * p / 100.0 + 1.0;  // 1-based
  double lower = std::floor(rank);
  double frac = rank - lower;
  size_t i = static_cast<size_t>(lower) - 1;
  if (i + 1 >= values.size()) return values.back();
  return values[i] + frac * (values[i + 1] - values[i]);
}

}  // namespace oracle

namespace fixtures {

// A small pool scene: ripple everywhere, struggle box active over
// [struggle_start_s, duration_s) when with_struggle is set.
inline neptune::SceneSpec small_scene(int duration_s, bool with_struggle,
                                      int struggle_start_s, uint64_t seed = 42) {
  neptune::SceneSpec spec;
  spec.width = 64;
  spec.height = 48;
  spec.fps = 25;
  spec.duration_s = duration_s;
  spec.water_base = 120.0;
  spec.ripple_amp = 6.0;
  spec.ripple_freq = 0.5;
  spec.rng_seed = seed;
  if (with_struggle) {
    neptune::StruggleSpec s;
    s.box = neptune::TruthBox{24, 18, 40, 30};
    s.amp = 70.0;
    s.freq = 6.0;
    s.start_s = struggle_start_s;
    s.end_s = duration_s;
    spec.struggle = s;
  }
  return spec;
}

// Merged-matrix fixture: three-level background noise (largest cluster) with
// a bright 5x5 blob; deterministic, no clustering required to build it.
inline neptune::MergedMatrix blob_matrix(int width = 20, int height = 20) {
  neptune::MergedMatrix m;
  m.width = width;
  m.height = height;
  m.values.resize(static_cast<size_t>(width) * height);
  for (int y = 1; y <= height; ++y) {
    for (int x = 1; x <= width; ++x) {
      size_t i = static_cast<size_t>(y - 1) * width + (x - 1);
      m.values[i] = 0.02 * ((x + 2 * y) % 3);  // 0, 0.02, 0.04
      if (x >= 8 && x <= 12 && y >= 8 && y <= 12) {
        m.values[i] = ((x + y) % 2) ? 0.95 : 1.0;
      }
    }
  }
  m.raw_min = 0.0;
  m.raw_max = 1.0;
  return m;
}

inline std::vector<double> random_series(std::mt19937& rng, size_t length,
                                         double lo = 0.0, double hi = 255.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> series(length);
  for (double& v : series) v = dist(rng);
  return series;
}

}  // namespace fixtures
