// 1-D k-means over the flattened merged matrix, water-cluster exclusion and
// connected-segment extraction.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace neptune {

struct ClusterAssignment {
  int k = 0;
  std::vector<double> centroids;   // ascending; labels renumbered to match
  std::vector<uint8_t> labels;     // per flat index, 0..k-1
  std::vector<int64_t> sizes;      // per cluster
  double sse = 0.0;                // within-cluster sum of squared error
  std::vector<double> sse_trace;   // SSE after each Lloyd iteration
};

// Exact 1-D k-means: the optimal contiguous partition of the sorted values is
// found by dynamic programming, then polished by Lloyd iterations (midpoint
// boundaries, ties to the lower-centroid cluster) until assignments are
// stable. Deterministic. Returns nullopt when the input has fewer than k
// distinct values.
std::optional<ClusterAssignment> kmeans_1d(std::span<const double> values,
                                           int k, int max_iters = 300);

// All cluster ids except the largest (assumed water). A size tie is broken by
// excluding the tied cluster with the larger centroid.
std::vector<int> exclude_largest(const ClusterAssignment& assign);

enum class Adjacency { four, eight };

Adjacency adjacency_from_string(const std::string& s);
std::string to_string(Adjacency adjacency);

struct Segment {
  int id = 0;
  int cluster_id = 0;
  int grid_width = 0;           // frame width, for flat-index <-> (x,y)
  std::vector<int32_t> pixels;  // 0-based flat indices, ascending
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  double centroid_x = 0.0, centroid_y = 0.0;

  int64_t pixel_count() const { return static_cast<int64_t>(pixels.size()); }
  int pixel_x(size_t i) const { return pixels[i] % grid_width + 1; }
  int pixel_y(size_t i) const { return pixels[i] / grid_width + 1; }
};

// Maximal connected components of each retained cluster, ordered by
// (bbox min_y, bbox min_x, first pixel) with ids assigned in that order.
std::vector<Segment> connected_segments(int width, int height,
                                        std::span<const uint8_t> labels,
                                        std::span<const int> retained,
                                        Adjacency adjacency);

struct WindowSegmentation {
  bool no_signal = false;
  std::optional<ClusterAssignment> clusters3;
  std::optional<ClusterAssignment> clusters4;
  std::vector<int> retained3;
  std::vector<int> retained4;
  std::vector<Segment> sa;  // from 3-means
  std::vector<Segment> sb;  // from 4-means
};

// {S_a} from 3-means and {S_b} from 4-means, each with its largest cluster
// excluded. A no-signal matrix or degenerate clustering yields empty lists.
WindowSegmentation extract_sa_sb(const MergedMatrix& matrix,
                                 Adjacency adjacency);

// Debug rendering: largest cluster white, retained clusters in darkening
// shades. CSV lists id,cluster,pixel_count,min_x,min_y,max_x,max_y.
GrayImage segment_map(const MergedMatrix& matrix,
                      const WindowSegmentation& seg);
std::string segments_to_csv(const WindowSegmentation& seg);

}  // namespace neptune
