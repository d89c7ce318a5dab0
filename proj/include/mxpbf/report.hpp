#pragma once

#include <string>

#include "json.hpp"

#include "mxpbf/calibration.hpp"
#include "mxpbf/metrics.hpp"
#include "mxpbf/multiscale.hpp"
#include "mxpbf/pipeline.hpp"
#include "mxpbf/segmenter.hpp"
#include "mxpbf/simgen.hpp"

namespace mxpbf {

using Json = nlohmann::ordered_json;

Json to_json(const ChangePointSet& set);
Json to_json(const MultiscaleResult& result, const std::string& source);
Json to_json(const CalibrationResult& result);
Json to_json(const Scenario& scenario);
Json to_json(const CombinedResult& result);
Json to_json(const F1Result& f1);

Scenario scenario_from_json(const Json& j);

// Writes the report document; "-" selects stdout.
void write_report(const Json& report, const std::string& path);
Json read_report(const std::string& path);

} // namespace mxpbf
