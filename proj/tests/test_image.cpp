#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "image.hpp"

namespace fs = std::filesystem;
using namespace neptune;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("neptune_img_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

GrayImage random_image(std::mt19937& rng, int w, int h) {
  GrayImage img;
  img.width = w;
  img.height = h;
  img.data.resize(static_cast<size_t>(w) * h);
  std::uniform_int_distribution<int> dist(0, 255);
  for (auto& v : img.data) v = static_cast<uint8_t>(dist(rng));
  return img;
}

// Test-only PNG encoder (the library never writes PNG).
void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<uint8_t>& rgb) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  REQUIRE(fp != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  REQUIRE(setjmp(png_jmpbuf(png)) == 0);
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<size_t>(y) * width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

TEST_CASE("luma follows the BT.601 weights") {
  CHECK(luma(255, 255, 255) == 255);
  CHECK(luma(0, 0, 0) == 0);
  CHECK(luma(100, 200, 50) == 153);  // round(29.9 + 117.4 + 5.7)
  // Idempotent on gray triples.
  for (int g = 0; g <= 255; ++g) {
    CHECK(luma(static_cast<uint8_t>(g), static_cast<uint8_t>(g),
               static_cast<uint8_t>(g)) == g);
  }
}

TEST_CASE("PGM round-trip is bit-identical") {
  TempDir dir;
  std::mt19937 rng(7);
  GrayImage img = random_image(rng, 33, 21);
  std::string path = (dir.path / "frame.pgm").string();
  write_pgm(path, img);
  GrayImage back = read_pgm(path);
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.data == img.data);
}

TEST_CASE("PGM header comments are skipped") {
  TempDir dir;
  std::string path = (dir.path / "c.pgm").string();
  std::string bytes = "P5\n# a comment\n2 2\n255\n";
  bytes += std::string("\x01\x02\x03\x04", 4);
  write_file_atomic(path, bytes);
  GrayImage img = read_pgm(path);
  CHECK(img.width == 2);
  CHECK(img.at(2, 2) == 4);
}

TEST_CASE("PNG frames load through luma conversion") {
  TempDir dir;
  // 2x1: white pixel and the (100,200,50) pixel.
  std::vector<uint8_t> rgb = {255, 255, 255, 100, 200, 50};
  std::string path = (dir.path / "f.png").string();
  write_png_rgb(path, 2, 1, rgb);
  auto frames = load_frame_sequence(dir.path.string(), FrameFormat::png_dir);
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].at(1, 1) == 255);
  CHECK(frames[0].at(2, 1) == 153);
}

TEST_CASE("frame directories load in lexicographic order") {
  TempDir dir;
  GrayImage a{1, 1, {10}};
  GrayImage b{1, 1, {20}};
  write_pgm((dir.path / "frame_002.pgm").string(), b);
  write_pgm((dir.path / "frame_001.pgm").string(), a);
  auto frames = load_frame_sequence(dir.path.string(), FrameFormat::pgm_dir);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].data[0] == 10);
  CHECK(frames[1].data[0] == 20);
}

TEST_CASE("loading errors carry the offending filename") {
  TempDir dir;
  write_pgm((dir.path / "a.pgm").string(), GrayImage{2, 2, {1, 2, 3, 4}});
  write_pgm((dir.path / "b.pgm").string(), GrayImage{3, 2, {1, 2, 3, 4, 5, 6}});
  CHECK_THROWS_WITH_AS(load_frame_sequence(dir.path.string(), FrameFormat::pgm_dir),
                       doctest::Contains("b.pgm"), ParseError);
  CHECK_THROWS_AS(load_frame_sequence((dir.path / "missing").string(),
                                      FrameFormat::pgm_dir),
                  IoError);
}

TEST_CASE("raw_y8 splits a file into frames by size") {
  TempDir dir;
  std::string path = (dir.path / "stream.y8").string();
  std::string bytes(2 * 3 * 4, '\0');
  for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<char>(i);
  write_file_atomic(path, bytes);
  auto frames = load_frame_sequence(path, FrameFormat::raw_y8, 2, 3);
  REQUIRE(frames.size() == 4);
  CHECK(frames[3].at(2, 3) == 23);
  // Size not divisible by the frame size.
  write_file_atomic(path, bytes.substr(0, 23));
  CHECK_THROWS_AS(load_frame_sequence(path, FrameFormat::raw_y8, 2, 3), ParseError);
  // Missing dimensions.
  CHECK_THROWS_AS(load_frame_sequence(path, FrameFormat::raw_y8, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("crop takes the sub-image anchored at (x0, y0)") {
  std::mt19937 rng(11);
  GrayImage img = random_image(rng, 500, 300);

  SUBCASE("full-frame crop is the identity") {
    GrayImage out = crop(img, 1, 1, img.width, img.height);
    CHECK(out.data == img.data);
  }
  SUBCASE("447x281 crop") {
    GrayImage out = crop(img, 10, 5, 447, 281);
    CHECK(out.width == 447);
    CHECK(out.height == 281);
    CHECK(out.at(1, 1) == img.at(10, 5));
    CHECK(out.at(447, 281) == img.at(456, 285));
  }
  SUBCASE("out-of-bounds rectangles throw") {
    CHECK_THROWS_AS(crop(img, 60, 1, 441, 300), std::invalid_argument);
    CHECK_THROWS_AS(crop(img, 0, 1, 10, 10), std::invalid_argument);
    CHECK_THROWS_AS(crop(img, 1, 300, 1, 2), std::invalid_argument);
  }
}

TEST_CASE("partition_windows walks the stream by stride") {
  std::vector<GrayImage> frames(250, GrayImage{2, 2, {0, 0, 0, 0}});

  SUBCASE("exact division") {
    auto windows = partition_windows(frames, 25, 5, 5);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].start_frame == 1);
    CHECK(windows[1].start_frame == 126);
  }
  SUBCASE("trailing partial windows are discarded") {
    std::vector<GrayImage> short_stream(125, GrayImage{2, 2, {0, 0, 0, 0}});
    auto windows = partition_windows(short_stream, 25, 4, 1);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].start_frame == 1);
    CHECK(windows[1].start_frame == 26);
  }
  SUBCASE("too few frames") {
    std::vector<GrayImage> tiny(100, GrayImage{2, 2, {0, 0, 0, 0}});
    CHECK_THROWS_AS(partition_windows(tiny, 25, 5, 1), std::invalid_argument);
  }
  SUBCASE("every window has exactly fps*duration frames and stays in bounds") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      int fps = 1 + static_cast<int>(rng() % 30);
      int duration = 1 + static_cast<int>(rng() % 5);
      int stride = 1 + static_cast<int>(rng() % 4);
      size_t count = static_cast<size_t>(fps) * duration + rng() % 200;
      std::vector<GrayImage> stream(count, GrayImage{1, 1, {0}});
      auto windows = partition_windows(stream, fps, duration, stride);
      CHECK(!windows.empty());
      for (const auto& w : windows) {
        CHECK(w.frames.size() == static_cast<size_t>(fps) * duration);
        CHECK(w.start_frame + static_cast<int64_t>(w.frames.size()) - 1 <=
              static_cast<int64_t>(count));
      }
    }
  }
}
