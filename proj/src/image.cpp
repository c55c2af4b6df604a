#include "image.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace neptune {

uint8_t luma(uint8_t r, uint8_t g, uint8_t b) {
  double v = 0.299 * r + 0.587 * g + 0.114 * b;
  long rounded = round_half_up(v);
  if (rounded < 0) rounded = 0;
  if (rounded > 255) rounded = 255;
  return static_cast<uint8_t>(rounded);
}

FrameFormat frame_format_from_string(const std::string& s) {
  if (s == "pgm_dir") return FrameFormat::pgm_dir;
  if (s == "png_dir") return FrameFormat::png_dir;
  if (s == "raw_y8") return FrameFormat::raw_y8;
  throw ParseError("unknown frame format: " + s);
}

namespace {

// P5 binary PGM. Header tokens may be separated by whitespace and
// '#'-comments; maxval must be 255.
GrayImage decode_pgm(const std::string& bytes, const std::string& name) {
  size_t pos = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ParseError("PGM " + name + ": " + what);
  };
  auto next_token = [&]() -> std::string {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) fail("truncated header");
    return bytes.substr(start, pos - start);
  };

  if (next_token() != "P5") fail("not a binary (P5) PGM");
  GrayImage img;
  try {
    img.width = std::stoi(next_token());
    img.height = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (maxval != 255) fail("unsupported maxval (want 255)");
  } catch (const std::logic_error&) {
    fail("malformed header");
  }
  if (img.width < 1 || img.height < 1) fail("bad dimensions");
  ++pos;  // single whitespace byte after maxval
  size_t need = static_cast<size_t>(img.width) * img.height;
  if (bytes.size() - pos < need) fail("truncated pixel data");
  img.data.assign(bytes.begin() + static_cast<ptrdiff_t>(pos),
                  bytes.begin() + static_cast<ptrdiff_t>(pos + need));
  return img;
}

GrayImage read_png(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw IoError("cannot open: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  std::vector<uint8_t> rgb;
  std::vector<png_bytep> rows;
  GrayImage img;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw ParseError("PNG decode failed: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  // Normalize every color type to 8-bit RGB.
  png_set_expand(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_read_update_info(png, info);

  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  size_t stride = png_get_rowbytes(png, info);
  rgb.resize(stride * img.height);
  rows.resize(static_cast<size_t>(img.height));
  for (int y = 0; y < img.height; ++y) rows[static_cast<size_t>(y)] = rgb.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  img.data.resize(static_cast<size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    const uint8_t* src = rgb.data() + stride * y;
    uint8_t* dst = img.data.data() + static_cast<size_t>(y) * img.width;
    for (int x = 0; x < img.width; ++x) {
      dst[x] = luma(src[3 * x], src[3 * x + 1], src[3 * x + 2]);
    }
  }
  return img;
}

std::vector<std::string> list_frames(const std::string& dir, const char* ext) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() == ext) names.push_back(entry.path().string());
  }
  if (names.empty()) throw IoError("no " + std::string(ext) + " frames in " + dir);
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  return decode_pgm(read_file(path), path);
}

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.data.data()), img.data.size());
  return out;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  write_file_atomic(path, encode_pgm(img));
}

std::vector<GrayImage> load_frame_sequence(const std::string& path,
                                           FrameFormat format, int raw_width,
                                           int raw_height) {
  std::vector<GrayImage> frames;
  if (format == FrameFormat::raw_y8) {
    if (raw_width < 1 || raw_height < 1) {
      throw std::invalid_argument("raw_y8 requires raw_width/raw_height in config");
    }
    std::string bytes = read_file(path);
    size_t frame_size = static_cast<size_t>(raw_width) * raw_height;
    if (bytes.empty() || bytes.size() % frame_size != 0) {
      throw ParseError("raw_y8 " + path + ": size " + std::to_string(bytes.size()) +
                       " is not a multiple of " + std::to_string(frame_size));
    }
    size_t count = bytes.size() / frame_size;
    frames.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      GrayImage img;
      img.width = raw_width;
      img.height = raw_height;
      img.data.assign(bytes.begin() + static_cast<ptrdiff_t>(i * frame_size),
                      bytes.begin() + static_cast<ptrdiff_t>((i + 1) * frame_size));
      frames.push_back(std::move(img));
    }
    return frames;
  }

  const char* ext = format == FrameFormat::pgm_dir ? ".pgm" : ".png";
  auto names = list_frames(path, ext);
  frames.reserve(names.size());
  for (const auto& name : names) {
    GrayImage img = format == FrameFormat::pgm_dir ? read_pgm(name) : read_png(name);
    if (!frames.empty() && !img.same_dims(frames.front())) {
      throw ParseError("mixed frame dimensions: " + name + " is " +
                       std::to_string(img.width) + "x" + std::to_string(img.height) +
                       ", expected " + std::to_string(frames.front().width) + "x" +
                       std::to_string(frames.front().height));
    }
    frames.push_back(std::move(img));
  }
  return frames;
}

GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h) {
  if (x0 < 1 || y0 < 1 || w < 1 || h < 1 || x0 + w - 1 > img.width ||
      y0 + h - 1 > img.height) {
    throw std::invalid_argument(
        "crop rectangle (" + std::to_string(x0) + "," + std::to_string(y0) + ")+" +
        std::to_string(w) + "x" + std::to_string(h) + " leaves the " +
        std::to_string(img.width) + "x" + std::to_string(img.height) + " image");
  }
  GrayImage out;
  out.width = w;
  out.height = h;
  out.data.resize(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const uint8_t* src = img.data.data() + static_cast<size_t>(y0 - 1 + y) * img.width + (x0 - 1);
    std::memcpy(out.data.data() + static_cast<size_t>(y) * w, src, static_cast<size_t>(w));
  }
  return out;
}

std::vector<FrameWindow> partition_windows(std::span<const GrayImage> frames,
                                           int fps, int duration_s,
                                           int stride_s) {
  if (fps < 1) throw std::invalid_argument("fps must be >= 1");
  if (duration_s < 1 || duration_s > 5) {
    throw std::invalid_argument("window duration must be 1..5 s");
  }
  if (stride_s < 1) throw std::invalid_argument("stride must be >= 1 s");
  size_t window_len = static_cast<size_t>(fps) * duration_s;
  if (frames.size() < window_len) {
    throw std::invalid_argument("stream of " + std::to_string(frames.size()) +
                                " frames is shorter than one " +
                                std::to_string(duration_s) + " s window");
  }
  size_t stride = static_cast<size_t>(fps) * stride_s;
  std::vector<FrameWindow> windows;
  for (size_t start = 0; start + window_len <= frames.size(); start += stride) {
    FrameWindow w;
    w.frames = frames.subspan(start, window_len);
    w.fps = fps;
    w.duration_s = duration_s;
    w.start_frame = static_cast<int64_t>(start) + 1;
    windows.push_back(w);
  }
  return windows;
}

}  // namespace neptune
