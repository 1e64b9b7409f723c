#pragma once

#include <json.hpp>

#include "psylex/classify.hpp"

// Internal serialization helpers shared by the model manifest and the
// evaluation reports. Not installed.
namespace psylex::detail {

nlohmann::ordered_json hyperparameters_to_json(const Hyperparameters& hp);
Hyperparameters hyperparameters_from_json(const nlohmann::ordered_json& j);

}  // namespace psylex::detail
