// Model file (JSON) serialization. Pipeline settings travel with the tables
// and rule sets so detection can enforce they match the run configuration.
#pragma once

#include <string>

#include "detect.hpp"

namespace neptune {

std::string model_to_json(const DetectorModel& model);
DetectorModel model_from_json(const std::string& text);

void save_model(const DetectorModel& model, const std::string& path);
DetectorModel load_model(const std::string& path);

}  // namespace neptune
