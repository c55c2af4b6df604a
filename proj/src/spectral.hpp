// Per-pixel temporal spectrum merging: each pixel's intensity series across a
// window is reduced to its maximum DFT magnitude, and the resulting matrix is
// min-max normalized to [0,1].
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "image.hpp"

namespace neptune {

enum class DcPolicy { exclude_dc, include_dc };

DcPolicy dc_policy_from_string(const std::string& s);
std::string to_string(DcPolicy policy);

// max over frequency bins k of |X[k]| for the length-L DFT of the series;
// exclude_dc restricts to k in [1..L-1]. L must be >= 2. Any length is
// supported; bins above L/2 are covered through conjugate symmetry of the
// real-input transform.
double max_abs_fft(std::span<const double> series, DcPolicy policy);

struct MergedMatrix {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major, in [0,1]
  DcPolicy dc_policy = DcPolicy::exclude_dc;
  double raw_min = 0.0;  // pre-normalization extrema
  double raw_max = 0.0;
  bool no_signal = false;  // constant raw matrix; values forced to all zero

  double at(int x, int y) const {
    return values[static_cast<size_t>(y - 1) * width + (x - 1)];
  }
};

// Reduces every pixel's time series (raw 8-bit intensities, frame order) by
// max_abs_fft and min-max normalizes. A constant raw matrix yields N == 0 and
// no_signal = true.
MergedMatrix merge_window(const FrameWindow& window, DcPolicy policy);

struct FlatArray {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // length width*height
};

// Row-major flattening: 1-based pixel (x, y) lands at 1-based flat index
// (y-1)*width + x, i.e. the outer loop walks rows and the inner loop runs
// across a full row of `width` values.
FlatArray flatten(const MergedMatrix& matrix);
MergedMatrix unflatten(const FlatArray& flat);

inline int64_t flat_index_1based(int x, int y, int width) {
  return static_cast<int64_t>(y - 1) * width + x;
}
inline std::pair<int, int> coords_from_flat_1based(int64_t index, int width) {
  return {static_cast<int>((index - 1) % width) + 1,
          static_cast<int>((index - 1) / width) + 1};
}

// Debug dumps.
GrayImage merged_to_gray(const MergedMatrix& matrix);  // values x255, rounded
std::string merged_to_csv(const MergedMatrix& matrix);

}  // namespace neptune
