#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace actionraid::cli {

/// Checks `instance` against the subset of JSON Schema used by the run
/// config: type, const, enum, properties, required, additionalProperties
/// (boolean only), items, minItems, minLength, minimum, maximum,
/// exclusiveMinimum and local "$ref" into "$defs". Returns one message per
/// violation, each prefixed with a JSON pointer to the offending value.
std::vector<std::string> check_schema(const nlohmann::json& instance, const nlohmann::json& schema);

}  // namespace actionraid::cli
