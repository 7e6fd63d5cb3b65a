#pragma once

#include "json.hpp"
#include "versa/state_machine.hpp"

namespace versa::detail {

nlohmann::ordered_json condition_to_json(const Condition& c);
Condition condition_from_json(const nlohmann::json& j);

}  // namespace versa::detail
