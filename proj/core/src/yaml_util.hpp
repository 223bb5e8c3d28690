#pragma once

// Internal helpers for the structured-text (YAML) documents: field access with
// line/column locations, and a bridge to nlohmann::json.

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "aiaudit/structured_text.hpp"

namespace aiaudit::detail {

using aiaudit::StructuredTextError;

std::string location(const YAML::Node& node);

YAML::Node parse_yaml(std::string_view text);

const YAML::Node require(const YAML::Node& map, const char* key, std::string_view context);

template <typename T>
T as(const YAML::Node& node, std::string_view context) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw StructuredTextError(location(node) + ": " + std::string(context) +
                                  " has the wrong type");
    }
}

template <typename T>
T field(const YAML::Node& map, const char* key, std::string_view context) {
    return as<T>(require(map, key, context), std::string(context) + "." + key);
}

nlohmann::json yaml_to_json(const YAML::Node& node);
void emit_json_as_yaml(YAML::Emitter& out, const nlohmann::json& value);
std::string json_to_yaml(const nlohmann::json& value);

}  // namespace aiaudit::detail
