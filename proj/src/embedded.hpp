#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Data files compiled into the library (see cmake/embedded.cpp.in).
namespace versa::embedded {

std::string_view transition_table_json();
std::string_view simplification_map_json();
std::optional<std::string_view> profile_json(std::string_view name);
std::vector<std::string> profile_names();

}  // namespace versa::embedded
