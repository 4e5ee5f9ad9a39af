#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "backnet/core_model.hpp"

namespace backnet {

using Json = nlohmann::json;

// Instance document:
//   {"stations": [{"id", "x_m", "y_m"}...], "K", "alpha", "D_t",
//    "models": {"of_cost_per_m", "hybrid_cost", "d_R_m", "d_D_m",
//               "lambda_R_m", "lambda_D_m", "reliability_plateau"?}}
// Missing model fields fall back to the LinkModels defaults.
ProblemInstance instance_from_json(const Json& doc);
Json instance_to_json(const ProblemInstance& problem);

Json models_to_json(const LinkModels& models);
LinkModels models_from_json(const Json& doc);

// Plan document: {"of_links": [[i, j]...], "hybrid_links": [[i, j]...]}, i < j.
// A pair listed in both arrays is kept as-is so C1 can flag it.
Plan plan_from_json(const Json& doc, std::size_t station_count);
Json plan_to_json(const Plan& plan);

Json report_to_json(const FeasibilityReport& report);

Json read_json_file(const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace backnet
