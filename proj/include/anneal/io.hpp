#pragma once

#include <string>

#include "json.hpp"

#include "anneal/bench.hpp"
#include "anneal/engine.hpp"
#include "anneal/hybrid.hpp"
#include "anneal/local_search.hpp"

namespace anneal {

using Json = nlohmann::json;

// Each reader starts from `base` and overrides the keys present. Unknown keys
// and malformed values throw ConfigError naming the offending path.
Json to_json(const InitTempSpec& spec);
InitTempSpec init_temp_from_json(const Json& j, const std::string& path = "init_temp");

Json to_json(const CoolingLaw& law);
CoolingLaw cooling_from_json(const Json& j, const std::string& path = "cooling");

Json to_json(const MoveSpec& move);
MoveSpec move_from_json(const Json& j, const std::string& path = "move");

Json to_json(const AcceptanceSpec& spec);
AcceptanceSpec acceptance_from_json(const Json& j, const std::string& path = "acceptance");

Json to_json(const AnnealConfig& config);
AnnealConfig anneal_config_from_json(const Json& j, const AnnealConfig& base = {},
                                     const std::string& path = "sa");

Json to_json(const LocalSearchSpec& spec);
LocalSearchSpec local_search_from_json(const Json& j, const LocalSearchSpec& base = {},
                                       const std::string& path = "local_search");

Json to_json(const HybridConfig& config);
HybridConfig hybrid_from_json(const Json& j, const HybridConfig& base,
                              const std::string& path = "hybrid");

Json to_json(const EvoConfig& config);
EvoConfig evo_from_json(const Json& j, const EvoConfig& base, const std::string& path = "evo");

Json to_json(const RunRecord& record);
RunRecord run_record_from_json(const Json& j);

Json to_json(const Trial& trial);
Trial trial_from_json(const Json& j);

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& path);

}  // namespace anneal
