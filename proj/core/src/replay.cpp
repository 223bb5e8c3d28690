#include "aiaudit/replay.hpp"

#include <cstdio>

#include "aiaudit/serialize.hpp"
#include "yaml_util.hpp"

namespace aiaudit {

using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "aiaudit-action-log/1";

std::uint64_t parse_hex(const json& j, const char* what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (!j.is_string()) throw LogFormatError(std::string(what) + " must be a hex string");
    const auto text = j.get<std::string>();
    try {
        std::size_t used = 0;
        const auto value = std::stoull(text, &used, 16);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw LogFormatError(std::string(what) + " is not a hex number: '" + text + "'");
    }
}

}  // namespace

std::string digest_hex(std::uint64_t digest) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

GameState replay(const GameConfig& config, std::shared_ptr<const Catalog> catalog,
                 const std::vector<LogRecord>& records) {
    GameState state = new_game(config, std::move(catalog));
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.turn != state.turn_counter) {
            throw ReplayDivergence(i, "recorded turn " + std::to_string(r.turn) + " but replay is at turn " +
                                          std::to_string(state.turn_counter));
        }
        try {
            apply_in_place(state, r.player, r.action);
        } catch (const EngineError& e) {
            throw ReplayDivergence(i, std::string(action_name(r.action)) + " by player " +
                                          std::to_string(r.player) + " rejected: " + e.what());
        }
    }
    return state;
}

GameState replay(const ActionLog& log, std::shared_ptr<const Catalog> catalog) {
    if (log.catalog_fingerprint && catalog && *log.catalog_fingerprint != catalog_fingerprint(*catalog)) {
        throw ReplayDivergence(0, "log was recorded against a different catalog");
    }
    GameState state = replay(log.config, std::move(catalog), log.records);
    if (log.final_digest) {
        const auto digest = state_digest(state);
        if (digest != *log.final_digest) {
            throw ReplayDivergence(log.records.size(), "final digest " + digest_hex(digest) +
                                                           " differs from recorded " +
                                                           digest_hex(*log.final_digest));
        }
    }
    return state;
}

json action_log_to_json(const ActionLog& log) {
    json records = json::array();
    for (const auto& r : log.records) {
        records.push_back({{"turn", r.turn}, {"player", r.player}, {"action", action_to_json(r.action)}});
    }
    json out{{"format", kFormat}, {"config", config_to_json(log.config)}, {"records", records}};
    if (log.catalog_fingerprint) out["catalog_fingerprint"] = digest_hex(*log.catalog_fingerprint);
    if (log.final_digest) out["final_digest"] = digest_hex(*log.final_digest);
    return out;
}

ActionLog action_log_from_json(const json& j) {
    try {
        if (!j.is_object()) throw LogFormatError("action log must be a mapping");
        if (j.value("format", "") != kFormat) {
            throw LogFormatError("unsupported action log format '" + j.value("format", "") + "'");
        }
        ActionLog log;
        log.config = config_from_json(j.at("config"));
        for (const auto& r : j.at("records")) {
            log.records.push_back({r.at("turn").get<int>(), r.at("player").get<int>(),
                                   action_from_json(r.at("action"))});
        }
        if (j.contains("catalog_fingerprint")) {
            log.catalog_fingerprint = parse_hex(j.at("catalog_fingerprint"), "catalog_fingerprint");
        }
        if (j.contains("final_digest")) log.final_digest = parse_hex(j.at("final_digest"), "final_digest");
        return log;
    } catch (const json::exception& e) {
        throw LogFormatError(std::string("malformed action log: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw LogFormatError(std::string("malformed action log: ") + e.what());
    }
}

std::string serialize_action_log(const ActionLog& log) {
    return detail::json_to_yaml(action_log_to_json(log));
}

ActionLog parse_action_log(std::string_view text) {
    try {
        return action_log_from_json(detail::yaml_to_json(detail::parse_yaml(text)));
    } catch (const detail::StructuredTextError& e) {
        throw LogFormatError(e.what());
    }
}

RecordedGame::RecordedGame(const GameConfig& config, std::shared_ptr<const Catalog> catalog)
    : state_(new_game(config, std::move(catalog))) {
    log_.config = config;
    log_.catalog_fingerprint = state_.catalog_fingerprint;
}

std::vector<Event> RecordedGame::apply(PlayerId player, const Action& action) {
    const int turn = state_.turn_counter;
    auto events = apply_in_place(state_, player, action);
    log_.records.push_back({turn, player, action});
    return events;
}

ActionLog RecordedGame::log() const {
    ActionLog out = log_;
    out.final_digest = state_digest(state_);
    return out;
}

}  // namespace aiaudit
