// Synthetic pool scenes: seeded ripple noise plus an optional oscillating
// struggle region, with ground-truth labels. Sinusoidal motion keeps the
// merged spectral values predictable in closed form for the oracle tests.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "features.hpp"

namespace neptune {

struct StruggleSpec {
  TruthBox box;
  double amp = 0.0;
  double freq = 0.0;  // Hz
  double start_s = 0.0;
  double end_s = 0.0;
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  int fps = 0;
  int duration_s = 0;
  double water_base = 0.0;
  double ripple_amp = 0.0;
  double ripple_freq = 0.0;  // Hz
  std::optional<StruggleSpec> struggle;
  uint64_t rng_seed = 0;
};

SceneSpec scene_from_json(const std::string& text);
SceneSpec load_scene(const std::string& path);
void validate(const SceneSpec& spec);

// Per-pixel phase in [0, 2*pi), from SplitMix64-style mixing of
// (seed, channel, x, y); channel 0 is the ripple field, 1 the struggle field.
double phase_field(uint64_t seed, int channel, int x, int y);

struct RenderedScene {
  std::vector<GrayImage> frames;
  std::vector<LabelRange> labels;  // one row when a struggle is present
};

// frame(t) pixel = clamp(round(water_base
//     + ripple_amp * sin(2*pi*ripple_freq*t + phase)
//     + [in box, start<=t<end] amp * sin(2*pi*freq*t + phase'))).
// Frame f (0-based) is rendered at t = f/fps. Pure function of the spec.
RenderedScene render(const SceneSpec& spec);

}  // namespace neptune
