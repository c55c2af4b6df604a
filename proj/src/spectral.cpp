#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>

namespace neptune {

DcPolicy dc_policy_from_string(const std::string& s) {
  if (s == "exclude_dc") return DcPolicy::exclude_dc;
  if (s == "include_dc") return DcPolicy::include_dc;
  throw ParseError("unknown dc_policy: " + s);
}

std::string to_string(DcPolicy policy) {
  return policy == DcPolicy::exclude_dc ? "exclude_dc" : "include_dc";
}

namespace {

// One cached r2c plan per transform length. Plans are created with
// FFTW_UNALIGNED so they can execute on ordinary vectors, and FFTW_ESTIMATE
// so plan choice does not depend on runtime timing. Plan creation is not
// thread-safe in FFTW; new-array execution is.
class PlanCache {
 public:
  fftw_plan get(int length) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(length);
    if (it != plans_.end()) return it->second;
    std::vector<double> in(static_cast<size_t>(length));
    std::vector<std::complex<double>> out(static_cast<size_t>(length) / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(
        length, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(length, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<int, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

double max_abs_spectrum(fftw_plan plan, double* in,
                        std::complex<double>* out, int length,
                        DcPolicy policy) {
  fftw_execute_dft_r2c(plan, in, reinterpret_cast<fftw_complex*>(out));
  int bins = length / 2 + 1;
  int first = policy == DcPolicy::exclude_dc ? 1 : 0;
  double best = 0.0;
  for (int k = first; k < bins; ++k) {
    double m = std::abs(out[k]);
    if (m > best) best = m;
  }
  return best;
}

}  // namespace

double max_abs_fft(std::span<const double> series, DcPolicy policy) {
  int length = static_cast<int>(series.size());
  if (length < 2) throw std::invalid_argument("series must have length >= 2");
  std::vector<double> in(series.begin(), series.end());
  std::vector<std::complex<double>> out(static_cast<size_t>(length) / 2 + 1);
  return max_abs_spectrum(plan_cache().get(length), in.data(), out.data(),
                          length, policy);
}

MergedMatrix merge_window(const FrameWindow& window, DcPolicy policy) {
  const int length = static_cast<int>(window.frames.size());
  if (length < 2) throw std::invalid_argument("window must span >= 2 frames");
  const int width = window.width();
  const int height = window.height();
  const size_t npix = static_cast<size_t>(width) * height;

  MergedMatrix merged;
  merged.width = width;
  merged.height = height;
  merged.dc_policy = policy;
  merged.values.resize(npix);

  fftw_plan plan = plan_cache().get(length);

  // Gather pixel series in blocks so the per-frame reads stay sequential.
  constexpr size_t kBlock = 512;
  std::vector<double> scratch(kBlock * static_cast<size_t>(length));
  std::vector<std::complex<double>> spectrum(static_cast<size_t>(length) / 2 + 1);

  for (size_t base = 0; base < npix; base += kBlock) {
    size_t block = std::min(kBlock, npix - base);
    for (int f = 0; f < length; ++f) {
      const uint8_t* src = window.frames[static_cast<size_t>(f)].data.data() + base;
      for (size_t j = 0; j < block; ++j) {
        scratch[j * static_cast<size_t>(length) + f] = src[j];
      }
    }
    for (size_t j = 0; j < block; ++j) {
      merged.values[base + j] =
          max_abs_spectrum(plan, scratch.data() + j * static_cast<size_t>(length),
                           spectrum.data(), length, policy);
    }
  }

  auto [lo, hi] = std::minmax_element(merged.values.begin(), merged.values.end());
  merged.raw_min = *lo;
  merged.raw_max = *hi;
  if (merged.raw_max == merged.raw_min) {
    std::fill(merged.values.begin(), merged.values.end(), 0.0);
    merged.no_signal = true;
    return merged;
  }
  double range = merged.raw_max - merged.raw_min;
  for (double& v : merged.values) v = (v - merged.raw_min) / range;
  return merged;
}

FlatArray flatten(const MergedMatrix& matrix) {
  return FlatArray{matrix.width, matrix.height, matrix.values};
}

MergedMatrix unflatten(const FlatArray& flat) {
  MergedMatrix m;
  m.width = flat.width;
  m.height = flat.height;
  m.values = flat.values;
  return m;
}

GrayImage merged_to_gray(const MergedMatrix& matrix) {
  GrayImage img;
  img.width = matrix.width;
  img.height = matrix.height;
  img.data.resize(matrix.values.size());
  for (size_t i = 0; i < matrix.values.size(); ++i) {
    img.data[i] = static_cast<uint8_t>(round_half_up(matrix.values[i] * 255.0));
  }
  return img;
}

std::string merged_to_csv(const MergedMatrix& matrix) {
  std::ostringstream out;
  for (int y = 1; y <= matrix.height; ++y) {
    for (int x = 1; x <= matrix.width; ++x) {
      if (x > 1) out << ',';
      out << format_double(matrix.at(x, y));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace neptune
