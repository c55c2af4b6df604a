#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "spectral.hpp"

using namespace neptune;

namespace {

FrameWindow make_window(const std::vector<GrayImage>& frames, int fps,
                        int duration_s) {
  FrameWindow w;
  w.frames = frames;
  w.fps = fps;
  w.duration_s = duration_s;
  w.start_frame = 1;
  return w;
}

}  // namespace

TEST_CASE("max_abs_fft on hand-checked series") {
  std::vector<double> constant = {5, 5, 5, 5};
  CHECK(max_abs_fft(constant, DcPolicy::exclude_dc) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(max_abs_fft(constant, DcPolicy::include_dc) == doctest::Approx(20.0).epsilon(1e-12));

  std::vector<double> alternating = {1, 0, 1, 0};
  CHECK(max_abs_fft(alternating, DcPolicy::exclude_dc) ==
        doctest::Approx(oracle::naive_dft_max({1, 0, 1, 0}, false)).epsilon(1e-12));
  CHECK(max_abs_fft(alternating, DcPolicy::exclude_dc) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(max_abs_fft(std::vector<double>{1.0}, DcPolicy::exclude_dc),
                  std::invalid_argument);
}

TEST_CASE("max_abs_fft agrees with the naive DFT at the window lengths") {
  std::mt19937 rng(101);
  for (int length : {25, 50, 75, 100, 125}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto series = fixtures::random_series(rng, static_cast<size_t>(length));
      for (bool include : {false, true}) {
        double got = max_abs_fft(series, include ? DcPolicy::include_dc
                                                 : DcPolicy::exclude_dc);
        double want = oracle::naive_dft_max(series, include);
        CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
      }
    }
  }
}

TEST_CASE("include_dc dominates and equals the sum for non-negative series") {
  std::mt19937 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    size_t length = 2 + rng() % 124;
    auto series = fixtures::random_series(rng, length);
    double inc = max_abs_fft(series, DcPolicy::include_dc);
    double exc = max_abs_fft(series, DcPolicy::exclude_dc);
    CHECK(inc >= exc - 1e-12);
    double sum = 0.0;
    for (double v : series) sum += v;
    CHECK(std::abs(inc - sum) <= 1e-9 * sum);
  }
}

TEST_CASE("merge_window of identical frames is a no-signal zero matrix") {
  std::vector<GrayImage> frames(50, GrayImage{8, 6, std::vector<uint8_t>(48, 77)});
  MergedMatrix merged = merge_window(make_window(frames, 25, 2), DcPolicy::exclude_dc);
  CHECK(merged.no_signal);
  for (double v : merged.values) CHECK(v == 0.0);
}

TEST_CASE("a single oscillating pixel normalizes to 1 with all others 0") {
  std::vector<GrayImage> frames(50, GrayImage{8, 6, std::vector<uint8_t>(48, 100)});
  for (size_t f = 0; f < frames.size(); ++f) {
    frames[f].at(3, 2) = (f % 2) ? 255 : 0;
  }
  MergedMatrix merged = merge_window(make_window(frames, 25, 2), DcPolicy::exclude_dc);
  CHECK(!merged.no_signal);
  for (int y = 1; y <= 6; ++y) {
    for (int x = 1; x <= 8; ++x) {
      if (x == 3 && y == 2) {
        CHECK(merged.at(x, y) == 1.0);
      } else {
        CHECK(merged.at(x, y) == 0.0);
      }
    }
  }
}

TEST_CASE("merged values live in [0,1] and attain both ends") {
  std::mt19937 rng(9);
  std::vector<GrayImage> frames;
  for (int f = 0; f < 25; ++f) {
    GrayImage img{10, 7, {}};
    img.data.resize(70);
    for (auto& v : img.data) v = static_cast<uint8_t>(rng() % 256);
    frames.push_back(std::move(img));
  }
  MergedMatrix merged = merge_window(make_window(frames, 25, 1), DcPolicy::exclude_dc);
  double lo = 1e9, hi = -1e9;
  for (double v : merged.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);
  CHECK(merged.raw_max > merged.raw_min);
}

TEST_CASE("constant intensity shifts leave the exclude_dc merge unchanged") {
  std::mt19937 rng(21);
  std::vector<GrayImage> base, shifted;
  for (int f = 0; f < 50; ++f) {
    GrayImage img{9, 5, {}}, img2{9, 5, {}};
    img.data.resize(45);
    img2.data.resize(45);
    for (size_t i = 0; i < img.data.size(); ++i) {
      img.data[i] = static_cast<uint8_t>(50 + rng() % 150);
      img2.data[i] = static_cast<uint8_t>(img.data[i] + 30);
    }
    base.push_back(std::move(img));
    shifted.push_back(std::move(img2));
  }
  MergedMatrix a = merge_window(make_window(base, 25, 2), DcPolicy::exclude_dc);
  MergedMatrix b = merge_window(make_window(shifted, 25, 2), DcPolicy::exclude_dc);
  REQUIRE(a.values.size() == b.values.size());
  for (size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("flatten uses row-major order with 1-based indices") {
  CHECK(flat_index_1based(1, 1, 447) == 1);
  CHECK(flat_index_1based(447, 1, 447) == 447);
  CHECK(flat_index_1based(1, 2, 447) == 448);
  CHECK(flat_index_1based(2, 2, 447) == 449);
  CHECK(flat_index_1based(447, 2, 447) == 894);
  CHECK(coords_from_flat_1based(448, 447) == std::pair{1, 2});

  MergedMatrix two_by_two;
  two_by_two.width = 2;
  two_by_two.height = 2;
  two_by_two.values = {1.0, 2.0, 3.0, 4.0};  // rows: (a b) (c d)
  FlatArray flat = flatten(two_by_two);
  CHECK(flat.values == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("unflatten inverts flatten") {
  std::mt19937 rng(5);
  MergedMatrix m;
  m.width = 13;
  m.height = 7;
  m.values.resize(91);
  for (auto& v : m.values) v = std::uniform_real_distribution<double>(0, 1)(rng);
  MergedMatrix back = unflatten(flatten(m));
  CHECK(back.width == m.width);
  CHECK(back.height == m.height);
  CHECK(back.values == m.values);
}
