#include "yaml_util.hpp"

#include <cctype>
#include <cstdint>

namespace aiaudit::detail {

std::string location(const YAML::Node& node) {
    const YAML::Mark mark = node.Mark();
    if (mark.is_null()) return "<unknown location>";
    return "line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1);
}

YAML::Node parse_yaml(std::string_view text) {
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw StructuredTextError("line " + std::to_string(e.mark.line + 1) + ", column " +
                                  std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
}

const YAML::Node require(const YAML::Node& map, const char* key, std::string_view context) {
    if (!map.IsMap()) {
        throw StructuredTextError(location(map) + ": " + std::string(context) + " must be a mapping");
    }
    const YAML::Node value = map[key];
    if (!value.IsDefined() || value.IsNull()) {
        throw StructuredTextError(location(map) + ": " + std::string(context) + " is missing field '" +
                                  key + "'");
    }
    return value;
}

nlohmann::json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return nullptr;
        case YAML::NodeType::Sequence: {
            auto array = nlohmann::json::array();
            for (const auto& item : node) array.push_back(yaml_to_json(item));
            return array;
        }
        case YAML::NodeType::Map: {
            auto object = nlohmann::json::object();
            for (const auto& kv : node) object[kv.first.as<std::string>()] = yaml_to_json(kv.second);
            return object;
        }
        case YAML::NodeType::Scalar:
            break;
    }
    const std::string& text = node.Scalar();
    // Quoted scalars stay strings; plain ones are typed by content.
    if (node.Tag() == "!") return text;
    if (text == "true") return true;
    if (text == "false") return false;
    if (text == "null" || text == "~") return nullptr;
    if (!text.empty() && (std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '-')) {
        std::size_t used = 0;
        try {
            if (text[0] == '-') {
                const long long v = std::stoll(text, &used);
                if (used == text.size()) return v;
            } else {
                const unsigned long long v = std::stoull(text, &used);
                if (used == text.size()) return static_cast<std::uint64_t>(v);
            }
            const double d = std::stod(text, &used);
            if (used == text.size()) return d;
        } catch (const std::exception&) {
        }
    }
    return text;
}

void emit_json_as_yaml(YAML::Emitter& out, const nlohmann::json& value) {
    switch (value.type()) {
        case nlohmann::json::value_t::object:
            out << YAML::BeginMap;
            for (const auto& [key, item] : value.items()) {
                out << YAML::Key << key << YAML::Value;
                emit_json_as_yaml(out, item);
            }
            out << YAML::EndMap;
            break;
        case nlohmann::json::value_t::array: {
            bool scalars = true;
            for (const auto& item : value) scalars = scalars && item.is_primitive();
            if (scalars) out << YAML::Flow;
            out << YAML::BeginSeq;
            for (const auto& item : value) emit_json_as_yaml(out, item);
            out << YAML::EndSeq;
            break;
        }
        case nlohmann::json::value_t::string:
            out << YAML::DoubleQuoted << value.get<std::string>();
            break;
        case nlohmann::json::value_t::boolean:
            out << (value.get<bool>() ? "true" : "false");
            break;
        case nlohmann::json::value_t::number_unsigned:
            out << value.get<std::uint64_t>();
            break;
        case nlohmann::json::value_t::number_integer:
            out << value.get<std::int64_t>();
            break;
        case nlohmann::json::value_t::number_float:
            out << value.dump();
            break;
        default:
            out << YAML::Null;
            break;
    }
}

std::string json_to_yaml(const nlohmann::json& value) {
    YAML::Emitter out;
    emit_json_as_yaml(out, value);
    return std::string(out.c_str()) + "\n";
}

}  // namespace aiaudit::detail

namespace aiaudit {

nlohmann::json parse_structured_text(std::string_view text) {
    return detail::yaml_to_json(detail::parse_yaml(text));
}

std::string to_structured_text(const nlohmann::json& value) {
    return detail::json_to_yaml(value);
}

}  // namespace aiaudit
