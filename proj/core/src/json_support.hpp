#pragma once

// Private JSON glue; nlohmann/json never appears in installed headers.

#include "json.hpp"

#include "graphadapt/model.hpp"

namespace graphadapt::detail {

using nlohmann::json;

json config_to_value(const GcnnConfig& config);
GcnnConfig config_from_value(const json& value);

}  // namespace graphadapt::detail
