#include "config.hpp"

#include <json.hpp>

#include <cstdio>

#include "util.hpp"

using nlohmann::json;

namespace neptune {

PercentileSource percentile_source_from_string(const std::string& s) {
  if (s == "computed") return PercentileSource::computed;
  if (s == "builtin") return PercentileSource::builtin;
  if (s == "builtin_repaired") return PercentileSource::builtin_repaired;
  throw ParseError("unknown percentile_source: " + s);
}

std::string to_string(PercentileSource source) {
  switch (source) {
    case PercentileSource::computed: return "computed";
    case PercentileSource::builtin: return "builtin";
    case PercentileSource::builtin_repaired: return "builtin_repaired";
  }
  return "computed";
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "fps") {
        cfg.fps = value.get<int>();
      } else if (key == "stride_s") {
        cfg.stride_s = value.get<int>();
      } else if (key == "dc_policy") {
        cfg.dc_policy = dc_policy_from_string(value.get<std::string>());
      } else if (key == "adjacency") {
        cfg.adjacency = adjacency_from_string(value.get<std::string>());
      } else if (key == "percentile_source") {
        cfg.percentile_source = percentile_source_from_string(value.get<std::string>());
      } else if (key == "crop") {
        if (value.is_null()) continue;
        CropRect rect;
        rect.x0 = value.at("x0").get<int>();
        rect.y0 = value.at("y0").get<int>();
        rect.w = value.at("w").get<int>();
        rect.h = value.at("h").get<int>();
        cfg.crop = rect;
      } else if (key == "raw_width") {
        cfg.raw_width = value.get<int>();
      } else if (key == "raw_height") {
        cfg.raw_height = value.get<int>();
      } else if (key == "std_convention") {
        if (value.get<std::string>() != PipelineSettings::kStdConvention) {
          throw ParseError("unsupported std_convention (only population)");
        }
      } else if (key == "percentile_method") {
        if (value.get<std::string>() != PipelineSettings::kPercentileMethod) {
          throw ParseError("unsupported percentile_method (only linear_interpolation)");
        }
      } else {
        throw ParseError("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what());
  }
  if (cfg.fps < 0) throw ParseError("fps must be positive");
  if (cfg.stride_s < 1) throw ParseError("stride_s must be >= 1");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return config_from_json(read_file(path));
}

void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto to_int = [&](const std::string& v) {
    try {
      size_t used = 0;
      int n = std::stoi(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return n;
    } catch (const std::logic_error&) {
      throw ParseError("config " + key + ": bad integer '" + v + "'");
    }
  };
  if (key == "fps") {
    cfg.fps = to_int(value);
    if (cfg.fps < 1) throw ParseError("fps must be >= 1");
  } else if (key == "stride_s") {
    cfg.stride_s = to_int(value);
    if (cfg.stride_s < 1) throw ParseError("stride_s must be >= 1");
  } else if (key == "dc_policy") {
    cfg.dc_policy = dc_policy_from_string(value);
  } else if (key == "adjacency") {
    cfg.adjacency = adjacency_from_string(value);
  } else if (key == "percentile_source") {
    cfg.percentile_source = percentile_source_from_string(value);
  } else if (key == "raw_width") {
    cfg.raw_width = to_int(value);
  } else if (key == "raw_height") {
    cfg.raw_height = to_int(value);
  } else if (key == "crop") {
    if (value == "none") {
      cfg.crop.reset();
      return;
    }
    CropRect rect;
    if (std::sscanf(value.c_str(), "%d,%d,%d,%d", &rect.x0, &rect.y0, &rect.w,
                    &rect.h) != 4) {
      throw ParseError("crop wants x0,y0,w,h");
    }
    cfg.crop = rect;
  } else {
    throw ParseError("unknown config key: " + key);
  }
}

void require_fps(const RunConfig& cfg) {
  if (cfg.fps < 1) {
    throw std::invalid_argument("config must declare fps (frame rate is never inferred)");
  }
}

void check_config_matches_model(const RunConfig& cfg, const DetectorModel& model) {
  if (cfg.dc_policy != model.settings.dc_policy) {
    throw ConfigMismatchError("config dc_policy " + to_string(cfg.dc_policy) +
                              " does not match model " +
                              to_string(model.settings.dc_policy));
  }
  if (cfg.adjacency != model.settings.adjacency) {
    throw ConfigMismatchError("config adjacency " + to_string(cfg.adjacency) +
                              " does not match model " +
                              to_string(model.settings.adjacency));
  }
}

}  // namespace neptune
