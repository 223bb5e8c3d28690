#pragma once

// The human-editable document notation shared by catalogs, action logs,
// simulation plans and config files (YAML), bridged to JSON values.

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace aiaudit {

class StructuredTextError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a document into a JSON value. Quoted scalars stay strings; plain
/// scalars become numbers or booleans when they look like one.
nlohmann::json parse_structured_text(std::string_view text);

std::string to_structured_text(const nlohmann::json& value);

}  // namespace aiaudit
