// neptune CLI: synth / train / detect / baseline / dump-merge / dump-segments.
// Talks to the library exclusively through the C API.
#include <neptune/neptune.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ConfigDeleter {
  void operator()(neptune_config* p) const { neptune_config_free(p); }
};
struct FramesDeleter {
  void operator()(neptune_frames* p) const { neptune_frames_free(p); }
};
struct ModelDeleter {
  void operator()(neptune_model* p) const { neptune_model_free(p); }
};
struct TimelineDeleter {
  void operator()(neptune_timeline* p) const { neptune_timeline_free(p); }
};

using ConfigPtr = std::unique_ptr<neptune_config, ConfigDeleter>;
using FramesPtr = std::unique_ptr<neptune_frames, FramesDeleter>;
using ModelPtr = std::unique_ptr<neptune_model, ModelDeleter>;
using TimelinePtr = std::unique_ptr<neptune_timeline, TimelineDeleter>;

[[noreturn]] void die(const std::string& what, neptune_status status) {
  std::fprintf(stderr, "neptune: %s: %s (%s)\n", what.c_str(),
               neptune_last_error(), neptune_status_name(status));
  std::exit(1);
}

void check(neptune_status status, const std::string& what) {
  if (status != NEPTUNE_OK) die(what, status);
}

// Flags shared by the frame-consuming subcommands.
struct CommonOptions {
  std::string config_path;
  std::string format = "pgm_dir";
  int fps = 0;
  int stride_s = 0;
  std::string dc_policy, adjacency, percentile_source, crop;
  int raw_width = 0, raw_height = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config JSON file");
    cmd->add_option("--format", format, "frame format: pgm_dir|png_dir|raw_y8")
        ->check(CLI::IsMember({"pgm_dir", "png_dir", "raw_y8"}));
    cmd->add_option("--fps", fps, "frames per second");
    cmd->add_option("--stride", stride_s, "window stride in seconds");
    cmd->add_option("--dc-policy", dc_policy, "exclude_dc|include_dc");
    cmd->add_option("--adjacency", adjacency, "four|eight");
    cmd->add_option("--percentile-source", percentile_source,
                    "computed|builtin|builtin_repaired");
    cmd->add_option("--crop", crop, "x0,y0,w,h or none");
    cmd->add_option("--raw-width", raw_width, "frame width for raw_y8");
    cmd->add_option("--raw-height", raw_height, "frame height for raw_y8");
  }

  ConfigPtr build() const {
    neptune_config* cfg = nullptr;
    if (!config_path.empty()) {
      check(neptune_config_load(config_path.c_str(), &cfg), "loading config");
    } else {
      check(neptune_config_create(&cfg), "creating config");
    }
    ConfigPtr ptr(cfg);
    auto set = [&](const char* key, const std::string& value) {
      check(neptune_config_set(ptr.get(), key, value.c_str()),
            std::string("setting ") + key);
    };
    if (fps > 0) set("fps", std::to_string(fps));
    if (stride_s > 0) set("stride_s", std::to_string(stride_s));
    if (!dc_policy.empty()) set("dc_policy", dc_policy);
    if (!adjacency.empty()) set("adjacency", adjacency);
    if (!percentile_source.empty()) set("percentile_source", percentile_source);
    if (!crop.empty()) set("crop", crop);
    if (raw_width > 0) set("raw_width", std::to_string(raw_width));
    if (raw_height > 0) set("raw_height", std::to_string(raw_height));
    return ptr;
  }
};

FramesPtr load_frames(const std::string& path, const CommonOptions& options,
                      const neptune_config* cfg) {
  neptune_frames* frames = nullptr;
  check(neptune_frames_load(path.c_str(), options.format.c_str(), cfg, &frames),
        "loading frames from " + path);
  return FramesPtr(frames);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NEPTUNE near-drowning detection pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(neptune_version()));

  // synth
  auto* synth = app.add_subcommand("synth", "render a synthetic pool scene");
  std::string scene_path, out_dir, labels_out;
  synth->add_option("--spec", scene_path, "scene JSON")->required();
  synth->add_option("--out", out_dir, "output frame directory")->required();
  synth->add_option("--labels", labels_out, "output labels CSV");

  // train
  auto* train = app.add_subcommand("train", "train a detector model");
  CommonOptions train_options;
  std::string train_frames, train_labels, model_out, summary_out;
  train->add_option("--frames", train_frames, "frame directory/file")->required();
  train->add_option("--labels", train_labels, "labels CSV")->required();
  train->add_option("--model", model_out, "output model JSON")->required();
  train->add_option("--summary", summary_out, "output sweep summary CSV");
  train_options.attach(train);

  // detect
  auto* detect = app.add_subcommand("detect", "run detection over a stream");
  CommonOptions detect_options;
  std::string detect_frames, model_in, csv_out, svg_out;
  detect->add_option("--frames", detect_frames, "frame directory/file")->required();
  detect->add_option("--model", model_in, "model JSON")->required();
  detect->add_option("--out-csv", csv_out, "detections CSV")->required();
  detect->add_option("--out-svg", svg_out, "timeline SVG");
  detect_options.attach(detect);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "evaluate the regression baseline");
  CommonOptions baseline_options;
  std::string base_frames, base_labels, report_out;
  int base_window = 5;
  baseline->add_option("--frames", base_frames, "frame directory/file")->required();
  baseline->add_option("--labels", base_labels, "labels CSV")->required();
  baseline->add_option("--window", base_window, "window length in seconds")
      ->check(CLI::Range(1, 5));
  baseline->add_option("--out", report_out, "report CSV")->required();
  baseline_options.attach(baseline);

  // dump-merge / dump-segments
  auto* dump_merge = app.add_subcommand("dump-merge", "write one merged matrix");
  auto* dump_segments = app.add_subcommand("dump-segments", "write one segment map");
  CommonOptions merge_options, segment_options;
  struct DumpArgs {
    std::string frames, pgm, csv;
    int start_second = 0;
    int window = 5;
  } merge_args, segment_args;
  for (auto [cmd, options, args] :
       {std::tuple{dump_merge, &merge_options, &merge_args},
        std::tuple{dump_segments, &segment_options, &segment_args}}) {
    cmd->add_option("--frames", args->frames, "frame directory/file")->required();
    cmd->add_option("--start-second", args->start_second, "window start (seconds)");
    cmd->add_option("--window", args->window, "window length in seconds")
        ->check(CLI::Range(1, 5));
    cmd->add_option("--pgm", args->pgm, "output PGM");
    cmd->add_option("--csv", args->csv, "output CSV");
    options->attach(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    check(neptune_synth(scene_path.c_str(), out_dir.c_str(),
                        labels_out.empty() ? nullptr : labels_out.c_str()),
          "synth");
    return 0;
  }

  if (train->parsed()) {
    ConfigPtr cfg = train_options.build();
    FramesPtr frames = load_frames(train_frames, train_options, cfg.get());
    neptune_model* model = nullptr;
    check(neptune_train(frames.get(), train_labels.c_str(), cfg.get(),
                        summary_out.empty() ? nullptr : summary_out.c_str(),
                        &model),
          "training");
    ModelPtr model_ptr(model);
    bool any_empty = false;
    for (int m = 1; m <= 5; ++m) {
      int64_t pos = 0, neg = 0, rules = 0, covered = 0;
      int num_vars = 0;
      neptune_model_window_stats(model, m, &pos, &neg, &num_vars, &rules, &covered);
      std::printf("m=%d positives=%lld negatives=%lld rules=%lld covered=%lld num_variables=%d\n",
                  m, static_cast<long long>(pos), static_cast<long long>(neg),
                  static_cast<long long>(rules), static_cast<long long>(covered),
                  num_vars);
      any_empty |= rules == 0;
    }
    check(neptune_model_save(model, model_out.c_str()), "saving model");
    if (any_empty) {
      std::fprintf(stderr,
                   "warning: at least one window length has an empty rule set "
                   "(confidence-1 rules unattainable)\n");
    }
    return 0;
  }

  if (detect->parsed()) {
    ConfigPtr cfg = detect_options.build();
    neptune_model* model = nullptr;
    check(neptune_model_load(model_in.c_str(), &model), "loading model");
    ModelPtr model_ptr(model);
    FramesPtr frames = load_frames(detect_frames, detect_options, cfg.get());
    neptune_timeline* timeline = nullptr;
    check(neptune_detect(model, frames.get(), cfg.get(), &timeline), "detection");
    TimelinePtr timeline_ptr(timeline);
    check(neptune_timeline_write_csv(timeline, csv_out.c_str()), "writing CSV");
    if (!svg_out.empty()) {
      check(neptune_timeline_write_svg(timeline, svg_out.c_str()), "writing SVG");
    }
    int detected_seconds = 0;
    int seconds = neptune_timeline_seconds(timeline);
    for (int t = 1; t <= seconds; ++t) {
      detected_seconds += neptune_timeline_union_at(timeline, t) == 1;
    }
    std::printf("seconds=%d detected=%d\n", seconds, detected_seconds);
    return 0;
  }

  if (baseline->parsed()) {
    ConfigPtr cfg = baseline_options.build();
    FramesPtr frames = load_frames(base_frames, baseline_options, cfg.get());
    double r = 0.0;
    check(neptune_baseline(frames.get(), base_labels.c_str(), base_window,
                           cfg.get(), report_out.c_str(), &r),
          "baseline");
    std::printf("window_s=%d pearson=%.6f\n", base_window, r);
    return 0;
  }

  for (auto [cmd, options, args, fn, what] :
       {std::tuple{dump_merge, &merge_options, &merge_args, &neptune_dump_merge,
                   "dump-merge"},
        std::tuple{dump_segments, &segment_options, &segment_args,
                   &neptune_dump_segments, "dump-segments"}}) {
    if (!cmd->parsed()) continue;
    if (args->pgm.empty() && args->csv.empty()) {
      std::fprintf(stderr, "neptune: %s: need --pgm and/or --csv\n", what);
      return 1;
    }
    ConfigPtr cfg = options->build();
    FramesPtr frames = load_frames(args->frames, *options, cfg.get());
    check(fn(frames.get(), cfg.get(), args->start_second, args->window,
             args->pgm.empty() ? nullptr : args->pgm.c_str(),
             args->csv.empty() ? nullptr : args->csv.c_str()),
          what);
    return 0;
  }

  return 0;
}
