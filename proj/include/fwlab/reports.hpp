#pragma once

#include <json.hpp>

#include "fwlab/experiments.hpp"
#include "fwlab/linear_analysis.hpp"

namespace fwlab {

nlohmann::json to_json(const RegimeReport& r);
nlohmann::json to_json(const WellposednessRange& r);
nlohmann::json to_json(const ExperimentSpec& spec);
nlohmann::json to_json(const DissipativityReport& r);
nlohmann::json to_json(const GalerkinReport& r);
nlohmann::json to_json(const AttractorProbeReport& r);
nlohmann::json to_json(const StrichartzReport& r);
nlohmann::json to_json(const SeparationReport& r);

}  // namespace fwlab
