// extern "C" surface over the C++ core. Handles own their C++ objects;
// exceptions are converted to status codes with a thread-local message.
#include "neptune/neptune.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "model_io.hpp"
#include "synth.hpp"
#include "train.hpp"

namespace fs = std::filesystem;

struct neptune_config {
  neptune::RunConfig cfg;
};

struct neptune_frames {
  std::vector<neptune::GrayImage> frames;
};

struct neptune_model {
  neptune::DetectorModel model;
  std::array<neptune::LengthSummary, 5> summaries{};
  bool has_summaries = false;
};

struct neptune_timeline {
  neptune::DetectionTimeline timeline;
};

namespace {

thread_local std::string g_last_error;

neptune_status fail(neptune_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, mapping exceptions onto status codes.
template <typename Fn>
neptune_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return NEPTUNE_OK;
  } catch (const neptune::ConfigMismatchError& e) {
    return fail(NEPTUNE_ERROR_CONFIG_MISMATCH, e.what());
  } catch (const neptune::TrainingError& e) {
    return fail(NEPTUNE_ERROR_TRAINING, e.what());
  } catch (const neptune::ParseError& e) {
    return fail(NEPTUNE_ERROR_PARSE, e.what());
  } catch (const neptune::IoError& e) {
    return fail(NEPTUNE_ERROR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NEPTUNE_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(NEPTUNE_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(NEPTUNE_ERROR_INTERNAL, "unknown error");
  }
}

neptune_status require(bool ok, const char* what) {
  return ok ? NEPTUNE_OK : fail(NEPTUNE_ERROR_INVALID_ARGUMENT, what);
}

}  // namespace

extern "C" {

const char* neptune_version(void) { return "1.0.0"; }

const char* neptune_status_name(neptune_status status) {
  switch (status) {
    case NEPTUNE_OK: return "ok";
    case NEPTUNE_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case NEPTUNE_ERROR_IO: return "io error";
    case NEPTUNE_ERROR_PARSE: return "parse error";
    case NEPTUNE_ERROR_CONFIG_MISMATCH: return "config/model mismatch";
    case NEPTUNE_ERROR_TRAINING: return "training error";
    case NEPTUNE_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* neptune_last_error(void) { return g_last_error.c_str(); }

neptune_status neptune_config_create(neptune_config** out) {
  if (neptune_status s = require(out != nullptr, "out must not be NULL")) return s;
  return guarded([&] { *out = new neptune_config{}; });
}

neptune_status neptune_config_load(const char* json_path, neptune_config** out) {
  if (neptune_status s = require(json_path && out, "json_path and out required")) return s;
  return guarded([&] {
    auto cfg = std::make_unique<neptune_config>();
    cfg->cfg = neptune::load_config(json_path);
    *out = cfg.release();
  });
}

neptune_status neptune_config_set(neptune_config* cfg, const char* key,
                                  const char* value) {
  if (neptune_status s = require(cfg && key && value, "cfg, key and value required")) return s;
  return guarded([&] { neptune::config_set(cfg->cfg, key, value); });
}

void neptune_config_free(neptune_config* cfg) { delete cfg; }

neptune_status neptune_frames_load(const char* path, const char* format,
                                   const neptune_config* cfg,
                                   neptune_frames** out) {
  if (neptune_status s = require(path && format && cfg && out,
                                 "path, format, cfg and out required")) {
    return s;
  }
  return guarded([&] {
    neptune::FrameFormat fmt = neptune::frame_format_from_string(format);
    auto frames = std::make_unique<neptune_frames>();
    frames->frames = neptune::load_frame_sequence(
        path, fmt, cfg->cfg.raw_width, cfg->cfg.raw_height);
    if (cfg->cfg.crop) {
      const neptune::CropRect& r = *cfg->cfg.crop;
      for (auto& img : frames->frames) {
        img = neptune::crop(img, r.x0, r.y0, r.w, r.h);
      }
    }
    *out = frames.release();
  });
}

int64_t neptune_frames_count(const neptune_frames* frames) {
  return frames ? static_cast<int64_t>(frames->frames.size()) : -1;
}

int neptune_frames_width(const neptune_frames* frames) {
  return frames && !frames->frames.empty() ? frames->frames.front().width : -1;
}

int neptune_frames_height(const neptune_frames* frames) {
  return frames && !frames->frames.empty() ? frames->frames.front().height : -1;
}

void neptune_frames_free(neptune_frames* frames) { delete frames; }

neptune_status neptune_synth(const char* scene_json_path,
                             const char* frames_dir,
                             const char* labels_csv_path) {
  if (neptune_status s = require(scene_json_path && frames_dir,
                                 "scene_json_path and frames_dir required")) {
    return s;
  }
  return guarded([&] {
    neptune::SceneSpec spec = neptune::load_scene(scene_json_path);
    neptune::RenderedScene scene = neptune::render(spec);
    fs::create_directories(frames_dir);
    std::vector<std::string> written;
    written.reserve(scene.frames.size());
    try {
      char name[32];
      for (size_t f = 0; f < scene.frames.size(); ++f) {
        std::snprintf(name, sizeof(name), "frame_%06zu.pgm", f + 1);
        std::string path = (fs::path(frames_dir) / name).string();
        neptune::write_pgm(path, scene.frames[f]);
        written.push_back(path);
      }
      if (labels_csv_path) {
        neptune::write_file_atomic(labels_csv_path,
                                   neptune::labels_to_csv(scene.labels));
      }
    } catch (...) {
      std::error_code ec;
      for (const std::string& path : written) fs::remove(path, ec);
      throw;
    }
  });
}

neptune_status neptune_train(const neptune_frames* frames,
                             const char* labels_csv_path,
                             const neptune_config* cfg,
                             const char* summary_csv_path,
                             neptune_model** out) {
  if (neptune_status s = require(frames && labels_csv_path && cfg && out,
                                 "frames, labels_csv_path, cfg and out required")) {
    return s;
  }
  return guarded([&] {
    std::vector<neptune::LabelRange> labels = neptune::load_labels(labels_csv_path);
    neptune::TrainOutput trained =
        neptune::train(frames->frames, labels, cfg->cfg);
    if (summary_csv_path) {
      neptune::write_file_atomic(summary_csv_path,
                                 neptune::summaries_to_csv(trained.summaries));
    }
    auto model = std::make_unique<neptune_model>();
    model->model = std::move(trained.model);
    model->summaries = std::move(trained.summaries);
    model->has_summaries = true;
    *out = model.release();
  });
}

neptune_status neptune_model_save(const neptune_model* model, const char* path) {
  if (neptune_status s = require(model && path, "model and path required")) return s;
  return guarded([&] { neptune::save_model(model->model, path); });
}

neptune_status neptune_model_load(const char* path, neptune_model** out) {
  if (neptune_status s = require(path && out, "path and out required")) return s;
  return guarded([&] {
    auto model = std::make_unique<neptune_model>();
    model->model = neptune::load_model(path);
    *out = model.release();
  });
}

void neptune_model_free(neptune_model* model) { delete model; }

neptune_status neptune_model_window_stats(const neptune_model* model,
                                          int window_s,
                                          int64_t* positive_windows,
                                          int64_t* negative_windows,
                                          int* num_variables,
                                          int64_t* rule_count,
                                          int64_t* positives_covered) {
  if (neptune_status s = require(model != nullptr, "model required")) return s;
  if (neptune_status s = require(window_s >= 1 && window_s <= 5,
                                 "window_s must be 1..5")) {
    return s;
  }
  const neptune::ModelEntry& entry = model->model.entry(window_s);
  if (positive_windows) *positive_windows = entry.positive_windows;
  if (negative_windows) *negative_windows = entry.negative_windows;
  if (num_variables) *num_variables = entry.ruleset.num_variables;
  if (rule_count) *rule_count = static_cast<int64_t>(entry.ruleset.rules.size());
  if (positives_covered) *positives_covered = entry.ruleset.total_positives_covered;
  g_last_error.clear();
  return NEPTUNE_OK;
}

neptune_status neptune_detect(const neptune_model* model,
                              const neptune_frames* frames,
                              const neptune_config* cfg,
                              neptune_timeline** out) {
  if (neptune_status s = require(model && frames && cfg && out,
                                 "model, frames, cfg and out required")) {
    return s;
  }
  return guarded([&] {
    neptune::require_fps(cfg->cfg);
    neptune::check_config_matches_model(cfg->cfg, model->model);
    auto timeline = std::make_unique<neptune_timeline>();
    timeline->timeline =
        neptune::detect_stream(model->model, frames->frames, cfg->cfg.fps);
    *out = timeline.release();
  });
}

int neptune_timeline_seconds(const neptune_timeline* timeline) {
  return timeline ? timeline->timeline.seconds : -1;
}

int neptune_timeline_detected(const neptune_timeline* timeline, int second,
                              int window_s) {
  if (!timeline || second < 1 || second > timeline->timeline.seconds ||
      window_s < 1 || window_s > 5) {
    return -1;
  }
  return timeline->timeline.detected[static_cast<size_t>(window_s - 1)]
                                    [static_cast<size_t>(second - 1)];
}

int neptune_timeline_union_at(const neptune_timeline* timeline, int second) {
  if (!timeline || second < 1 || second > timeline->timeline.seconds) return -1;
  return timeline->timeline.union_detected[static_cast<size_t>(second - 1)];
}

neptune_status neptune_timeline_write_csv(const neptune_timeline* timeline,
                                          const char* path) {
  if (neptune_status s = require(timeline && path, "timeline and path required")) return s;
  return guarded([&] {
    neptune::write_file_atomic(path, neptune::timeline_to_csv(timeline->timeline));
  });
}

neptune_status neptune_timeline_write_svg(const neptune_timeline* timeline,
                                          const char* path) {
  if (neptune_status s = require(timeline && path, "timeline and path required")) return s;
  return guarded([&] {
    neptune::write_file_atomic(path, neptune::timeline_to_svg(timeline->timeline));
  });
}

void neptune_timeline_free(neptune_timeline* timeline) { delete timeline; }

neptune_status neptune_baseline(const neptune_frames* frames,
                                const char* labels_csv_path, int window_s,
                                const neptune_config* cfg,
                                const char* report_csv_path,
                                double* pearson_out) {
  if (neptune_status s = require(frames && labels_csv_path && cfg && report_csv_path,
                                 "frames, labels, cfg and report path required")) {
    return s;
  }
  if (neptune_status s = require(window_s >= 1 && window_s <= 5,
                                 "window_s must be 1..5")) {
    return s;
  }
  return guarded([&] {
    std::vector<neptune::LabelRange> labels = neptune::load_labels(labels_csv_path);
    neptune::BaselineReport report =
        neptune::baseline_report(frames->frames, labels, cfg->cfg, window_s);
    neptune::write_file_atomic(report_csv_path, report.csv);
    if (pearson_out) *pearson_out = report.pearson;
  });
}

namespace {

neptune::MergedMatrix merge_for_dump(const neptune_frames* frames,
                                     const neptune_config* cfg,
                                     int start_second, int window_s) {
  neptune::require_fps(cfg->cfg);
  if (window_s < 1 || window_s > 5) {
    throw std::invalid_argument("window_s must be 1..5");
  }
  if (start_second < 0) throw std::invalid_argument("start_second must be >= 0");
  size_t start = static_cast<size_t>(start_second) * cfg->cfg.fps;
  size_t len = static_cast<size_t>(window_s) * cfg->cfg.fps;
  if (start + len > frames->frames.size()) {
    throw std::invalid_argument("window exceeds the stream");
  }
  neptune::FrameWindow window;
  window.frames = std::span<const neptune::GrayImage>(frames->frames).subspan(start, len);
  window.fps = cfg->cfg.fps;
  window.duration_s = window_s;
  window.start_frame = static_cast<int64_t>(start) + 1;
  return neptune::merge_window(window, cfg->cfg.dc_policy);
}

}  // namespace

neptune_status neptune_dump_merge(const neptune_frames* frames,
                                  const neptune_config* cfg, int start_second,
                                  int window_s, const char* pgm_path,
                                  const char* csv_path) {
  if (neptune_status s = require(frames && cfg, "frames and cfg required")) return s;
  if (neptune_status s = require(pgm_path || csv_path, "need at least one output path")) return s;
  return guarded([&] {
    neptune::MergedMatrix merged = merge_for_dump(frames, cfg, start_second, window_s);
    if (pgm_path) neptune::write_pgm(pgm_path, neptune::merged_to_gray(merged));
    if (csv_path) neptune::write_file_atomic(csv_path, neptune::merged_to_csv(merged));
  });
}

neptune_status neptune_dump_segments(const neptune_frames* frames,
                                     const neptune_config* cfg,
                                     int start_second, int window_s,
                                     const char* pgm_path,
                                     const char* csv_path) {
  if (neptune_status s = require(frames && cfg, "frames and cfg required")) return s;
  if (neptune_status s = require(pgm_path || csv_path, "need at least one output path")) return s;
  return guarded([&] {
    neptune::MergedMatrix merged = merge_for_dump(frames, cfg, start_second, window_s);
    neptune::WindowSegmentation seg =
        neptune::extract_sa_sb(merged, cfg->cfg.adjacency);
    if (pgm_path) neptune::write_pgm(pgm_path, neptune::segment_map(merged, seg));
    if (csv_path) neptune::write_file_atomic(csv_path, neptune::segments_to_csv(seg));
  });
}

}  // extern "C"
