// Run configuration shared by the CLI and C API. Every pipeline decision that
// affects trained cutoffs lives here and is copied into the model file.
#pragma once

#include <optional>
#include <string>

#include "detect.hpp"

namespace neptune {

enum class PercentileSource { computed, builtin, builtin_repaired };

PercentileSource percentile_source_from_string(const std::string& s);
std::string to_string(PercentileSource source);

struct RunConfig {
  int fps = 0;  // required before any frame work
  std::optional<CropRect> crop;
  int stride_s = 1;
  DcPolicy dc_policy = DcPolicy::exclude_dc;
  Adjacency adjacency = Adjacency::four;
  PercentileSource percentile_source = PercentileSource::computed;
  int raw_width = 0;   // only for raw_y8 input
  int raw_height = 0;

  PipelineSettings settings() const {
    return PipelineSettings{dc_policy, adjacency};
  }
};

RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

// Applies one "key=value" style update; used by CLI flags and the C API.
void config_set(RunConfig& cfg, const std::string& key, const std::string& value);

void require_fps(const RunConfig& cfg);

// Detection refuses to run with settings other than the ones the model was
// trained with.
void check_config_matches_model(const RunConfig& cfg, const DetectorModel& model);

}  // namespace neptune
