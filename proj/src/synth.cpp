#include "synth.hpp"

#include <json.hpp>

#include <cmath>

#include "util.hpp"

using nlohmann::json;

namespace neptune {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

uint64_t mix64(uint64_t z) {
  // SplitMix64 finalizer (Steele, Lea & Flood).
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t absorb(uint64_t h, uint64_t v) { return mix64(h ^ v); }

}  // namespace

double phase_field(uint64_t seed, int channel, int x, int y) {
  uint64_t h = absorb(absorb(absorb(seed, static_cast<uint64_t>(channel)),
                             static_cast<uint64_t>(x)),
                      static_cast<uint64_t>(y));
  double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0, 1)
  return unit * kTwoPi;
}

SceneSpec scene_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene JSON: ") + e.what());
  }
  SceneSpec spec;
  try {
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    spec.fps = j.at("fps").get<int>();
    spec.duration_s = j.at("duration_s").get<int>();
    spec.water_base = j.at("water_base").get<double>();
    spec.ripple_amp = j.value("ripple_amp", 0.0);
    spec.ripple_freq = j.value("ripple_freq", 0.0);
    spec.rng_seed = j.value("rng_seed", uint64_t{0});
    if (j.contains("struggle") && !j.at("struggle").is_null()) {
      const json& s = j.at("struggle");
      StruggleSpec st;
      st.box.min_x = s.at("min_x").get<int>();
      st.box.min_y = s.at("min_y").get<int>();
      st.box.max_x = s.at("max_x").get<int>();
      st.box.max_y = s.at("max_y").get<int>();
      st.amp = s.at("amp").get<double>();
      st.freq = s.at("freq").get<double>();
      st.start_s = s.at("start_s").get<double>();
      st.end_s = s.at("end_s").get<double>();
      spec.struggle = st;
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene JSON: ") + e.what());
  }
  validate(spec);
  return spec;
}

SceneSpec load_scene(const std::string& path) {
  return scene_from_json(read_file(path));
}

void validate(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw ParseError("scene: bad dimensions");
  if (spec.fps < 1) throw ParseError("scene: fps must be >= 1");
  if (spec.duration_s < 1) throw ParseError("scene: duration must be >= 1 s");
  if (spec.water_base < 0 || spec.water_base > 255) {
    throw ParseError("scene: water_base must be in [0,255]");
  }
  double nyquist = spec.fps / 2.0;
  if (spec.ripple_amp < 0) throw ParseError("scene: ripple_amp must be >= 0");
  if (spec.ripple_freq < 0 || spec.ripple_freq >= nyquist) {
    throw ParseError("scene: ripple_freq must be in [0, fps/2)");
  }
  if (spec.struggle) {
    const StruggleSpec& s = *spec.struggle;
    if (s.box.min_x < 1 || s.box.min_y < 1 || s.box.max_x < s.box.min_x ||
        s.box.max_y < s.box.min_y || s.box.max_x > spec.width ||
        s.box.max_y > spec.height) {
      throw ParseError("scene: struggle box leaves the frame");
    }
    if (s.amp < 0) throw ParseError("scene: struggle amp must be >= 0");
    if (s.freq < 0 || s.freq >= nyquist) {
      throw ParseError("scene: struggle freq must be in [0, fps/2)");
    }
    if (s.start_s < 0 || s.end_s <= s.start_s || s.end_s > spec.duration_s) {
      throw ParseError("scene: struggle interval must satisfy 0 <= start < end <= duration");
    }
  }
}

RenderedScene render(const SceneSpec& spec) {
  validate(spec);
  const int64_t total = static_cast<int64_t>(spec.fps) * spec.duration_s;
  const size_t npix = static_cast<size_t>(spec.width) * spec.height;

  RenderedScene scene;
  scene.frames.assign(static_cast<size_t>(total), GrayImage{});

  // Phase fields are frame-independent; compute once.
  std::vector<double> ripple_phase(npix), struggle_phase;
  for (int y = 1; y <= spec.height; ++y) {
    for (int x = 1; x <= spec.width; ++x) {
      ripple_phase[static_cast<size_t>(y - 1) * spec.width + (x - 1)] =
          phase_field(spec.rng_seed, 0, x, y);
    }
  }
  if (spec.struggle) {
    struggle_phase.resize(npix);
    for (int y = 1; y <= spec.height; ++y) {
      for (int x = 1; x <= spec.width; ++x) {
        struggle_phase[static_cast<size_t>(y - 1) * spec.width + (x - 1)] =
            phase_field(spec.rng_seed, 1, x, y);
      }
    }
  }

  parallel_for(total, [&](int64_t f) {
    double t = static_cast<double>(f) / spec.fps;
    GrayImage& img = scene.frames[static_cast<size_t>(f)];
    img.width = spec.width;
    img.height = spec.height;
    img.data.resize(npix);
    bool active = spec.struggle && t >= spec.struggle->start_s && t < spec.struggle->end_s;
    for (int y = 1; y <= spec.height; ++y) {
      for (int x = 1; x <= spec.width; ++x) {
        size_t i = static_cast<size_t>(y - 1) * spec.width + (x - 1);
        double v = spec.water_base;
        if (spec.ripple_amp > 0) {
          v += spec.ripple_amp *
               std::sin(kTwoPi * spec.ripple_freq * t + ripple_phase[i]);
        }
        if (active && x >= spec.struggle->box.min_x && x <= spec.struggle->box.max_x &&
            y >= spec.struggle->box.min_y && y <= spec.struggle->box.max_y) {
          v += spec.struggle->amp *
               std::sin(kTwoPi * spec.struggle->freq * t + struggle_phase[i]);
        }
        long pixel = round_half_up(v);
        if (pixel < 0) pixel = 0;
        if (pixel > 255) pixel = 255;
        img.data[i] = static_cast<uint8_t>(pixel);
      }
    }
  });

  if (spec.struggle) {
    // Scan with the same activity predicate the renderer used.
    int64_t first = -1, last = -1;
    for (int64_t f = 0; f < total; ++f) {
      double t = static_cast<double>(f) / spec.fps;
      if (t >= spec.struggle->start_s && t < spec.struggle->end_s) {
        if (first < 0) first = f;
        last = f;
      }
    }
    if (first >= 0) {
      scene.labels.push_back(LabelRange{first + 1, last + 1, spec.struggle->box});
    }
  }
  return scene;
}

}  // namespace neptune
