// Shared error types and small helpers used across the pipeline.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace neptune {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Round half-up to the nearest integer (0.5 -> 1, 1.5 -> 2).
inline long round_half_up(double v) {
  return static_cast<long>(std::floor(v + 0.5));
}

// Shortest decimal form that round-trips a double; integers print bare.
std::string format_double(double v);

// Writes via a temp file in the same directory and renames into place, so a
// failed run never leaves a partial file behind.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

// Thread cap: NEPTUNE_THREADS if set (>=1), else hardware concurrency.
int max_threads();

// Runs fn(i) for i in [0, n). Work items must write only to disjoint state;
// scheduling order is unspecified but results are deterministic when that
// holds. Falls back to a plain loop for small n or a single-thread cap.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace neptune
