// Grayscale frames, frame-directory loading and window partitioning.
//
// Coordinates are 1-based (x, y) with x in [1..width] (horizontal) and y in
// [1..height]; storage is row-major, so pixel (x, y) sits at flat offset
// (y-1)*width + (x-1).
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "util.hpp"

namespace neptune {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;  // row-major, size width*height

  uint8_t at(int x, int y) const {
    return data[static_cast<size_t>(y - 1) * width + (x - 1)];
  }
  uint8_t& at(int x, int y) {
    return data[static_cast<size_t>(y - 1) * width + (x - 1)];
  }
  bool same_dims(const GrayImage& other) const {
    return width == other.width && height == other.height;
  }
};

// ITU-R BT.601 luma, rounded half-up. Maps (g,g,g) back to g.
uint8_t luma(uint8_t r, uint8_t g, uint8_t b);

enum class FrameFormat { pgm_dir, png_dir, raw_y8 };

FrameFormat frame_format_from_string(const std::string& s);

// Loads a directory of .pgm/.png frames in lexicographic filename order, or a
// single headerless raw file of raw_width*raw_height bytes per frame. Color
// PNGs are converted through luma(). Throws IoError/ParseError naming the
// offending file.
std::vector<GrayImage> load_frame_sequence(const std::string& path,
                                           FrameFormat format,
                                           int raw_width = 0,
                                           int raw_height = 0);

GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);
std::string encode_pgm(const GrayImage& img);

// w x h sub-image whose (1,1) is (x0,y0) of the input. Throws on a rectangle
// that leaves the image.
GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h);

struct CropRect {
  int x0 = 0, y0 = 0, w = 0, h = 0;
};

struct FrameWindow {
  std::span<const GrayImage> frames;
  int fps = 0;
  int duration_s = 0;
  int64_t start_frame = 0;  // 1-based index in the source stream

  int width() const { return frames.empty() ? 0 : frames.front().width; }
  int height() const { return frames.empty() ? 0 : frames.front().height; }
};

// Fixed-length windows of fps*duration_s frames, advancing stride_s seconds
// between starts; a trailing partial window is discarded. duration_s must be
// in 1..5. Throws if the stream is shorter than one window.
std::vector<FrameWindow> partition_windows(std::span<const GrayImage> frames,
                                           int fps, int duration_s,
                                           int stride_s);

}  // namespace neptune
