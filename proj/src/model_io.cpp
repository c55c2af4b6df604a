#include "model_io.hpp"

#include <json.hpp>

#include "util.hpp"

using nlohmann::json;

namespace neptune {

namespace {

json table_to_json(const PercentileTable& table) {
  json variables = json::object();
  const auto& names = variable_names();
  for (int v = 0; v < kNumVariables; ++v) {
    const auto& c = table.cutoffs[static_cast<size_t>(v)];
    variables[names[static_cast<size_t>(v)]] = {c[0], c[1], c[2]};
  }
  return json{{"window_s", table.window_s}, {"variables", variables}};
}

PercentileTable table_from_json(const json& j) {
  PercentileTable table;
  table.window_s = j.at("window_s").get<int>();
  const json& variables = j.at("variables");
  const auto& names = variable_names();
  for (int v = 0; v < kNumVariables; ++v) {
    const json& row = variables.at(names[static_cast<size_t>(v)]);
    if (!row.is_array() || row.size() != 3) {
      throw ParseError("model: bad cutoffs for " + names[static_cast<size_t>(v)]);
    }
    for (int i = 0; i < 3; ++i) {
      table.cutoffs[static_cast<size_t>(v)][static_cast<size_t>(i)] =
          row[static_cast<size_t>(i)].get<double>();
    }
  }
  return table;
}

json ruleset_to_json(const RuleSet& set) {
  json rules = json::array();
  const auto& names = variable_names();
  for (const Rule& rule : set.rules) {
    json items = json::array();
    for (int v = 0; v < kNumVariables; ++v) {
      uint8_t bin = rule.bins[static_cast<size_t>(v)];
      if (bin != 0) {
        items.push_back({{"var", names[static_cast<size_t>(v)]}, {"bin", bin}});
      }
    }
    rules.push_back(std::move(items));
  }
  return json{{"num_variables", set.num_variables},
              {"total_positives_covered", set.total_positives_covered},
              {"rules", rules}};
}

RuleSet ruleset_from_json(const json& j, int window_s) {
  RuleSet set;
  set.window_s = window_s;
  set.num_variables = j.at("num_variables").get<int>();
  set.total_positives_covered = j.at("total_positives_covered").get<int64_t>();
  for (const json& items : j.at("rules")) {
    Rule rule;
    for (const json& item : items) {
      int v = variable_index(item.at("var").get<std::string>());
      if (v < 0) throw ParseError("model: unknown variable " + item.at("var").dump());
      int bin = item.at("bin").get<int>();
      if (bin < 1 || bin > 4) throw ParseError("model: bin out of range");
      rule.bins[static_cast<size_t>(v)] = static_cast<uint8_t>(bin);
    }
    set.rules.push_back(rule);
  }
  return set;
}

}  // namespace

std::string model_to_json(const DetectorModel& model) {
  json windows = json::object();
  for (int m = 1; m <= 5; ++m) {
    const ModelEntry& entry = model.entry(m);
    windows[std::to_string(m)] = {
        {"percentile_table", table_to_json(entry.table)},
        {"ruleset", ruleset_to_json(entry.ruleset)},
        {"positive_windows", entry.positive_windows},
        {"negative_windows", entry.negative_windows},
    };
  }
  json j{{"version", model.version},
         {"dc_policy", to_string(model.settings.dc_policy)},
         {"adjacency", to_string(model.settings.adjacency)},
         {"std_convention", PipelineSettings::kStdConvention},
         {"percentile_method", PipelineSettings::kPercentileMethod},
         {"largest_tie", PipelineSettings::kLargestTie},
         {"percentile_source", model.percentile_source},
         {"windows", windows}};
  return j.dump(2) + "\n";
}

DetectorModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  try {
    DetectorModel model;
    model.version = j.at("version").get<int>();
    if (model.version != 1) {
      throw ParseError("unsupported model version " + std::to_string(model.version));
    }
    model.settings.dc_policy = dc_policy_from_string(j.at("dc_policy").get<std::string>());
    model.settings.adjacency = adjacency_from_string(j.at("adjacency").get<std::string>());
    if (j.at("std_convention").get<std::string>() != PipelineSettings::kStdConvention ||
        j.at("percentile_method").get<std::string>() != PipelineSettings::kPercentileMethod) {
      throw ParseError("model uses an unsupported convention");
    }
    model.percentile_source = j.at("percentile_source").get<std::string>();
    const json& windows = j.at("windows");
    for (int m = 1; m <= 5; ++m) {
      const std::string key = std::to_string(m);
      if (!windows.contains(key)) {
        throw ParseError("model is missing the " + key + " s window entry");
      }
      const json& w = windows.at(key);
      ModelEntry& entry = model.entry(m);
      entry.table = table_from_json(w.at("percentile_table"));
      if (entry.table.window_s != m) {
        throw ParseError("model window " + key + " carries a mismatched table");
      }
      entry.ruleset = ruleset_from_json(w.at("ruleset"), m);
      entry.positive_windows = w.value("positive_windows", int64_t{0});
      entry.negative_windows = w.value("negative_windows", int64_t{0});
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
}

void save_model(const DetectorModel& model, const std::string& path) {
  write_file_atomic(path, model_to_json(model));
}

DetectorModel load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

}  // namespace neptune
