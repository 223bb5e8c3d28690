#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiaudit/engine.hpp"

namespace aiaudit {

struct LogRecord {
    int turn = 0;
    PlayerId player = 0;
    Action action;

    bool operator==(const LogRecord&) const = default;
};

struct ActionLog {
    GameConfig config;
    std::vector<LogRecord> records;
    std::optional<std::uint64_t> catalog_fingerprint;
    std::optional<std::uint64_t> final_digest;

    bool operator==(const ActionLog&) const = default;
};

class ReplayDivergence : public std::runtime_error {
public:
    ReplayDivergence(std::size_t step, const std::string& what)
        : std::runtime_error("replay diverged at step " + std::to_string(step) + ": " + what), step_(step) {}

    /// Index into the record list; equals the record count for a final
    /// digest mismatch.
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class LogFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Re-runs a recorded game from new_game. Throws ReplayDivergence naming the
/// first record whose turn counter or action does not fit the replayed state.
GameState replay(const GameConfig& config, std::shared_ptr<const Catalog> catalog,
                 const std::vector<LogRecord>& records);

/// As above, additionally checking the catalog fingerprint and final digest
/// when the log carries them.
GameState replay(const ActionLog& log, std::shared_ptr<const Catalog> catalog);

nlohmann::json action_log_to_json(const ActionLog& log);
ActionLog action_log_from_json(const nlohmann::json& j);

/// Structured-text (YAML) form, the same notation as catalog files.
std::string serialize_action_log(const ActionLog& log);
ActionLog parse_action_log(std::string_view text);

std::string digest_hex(std::uint64_t digest);

/// Game state plus the log of every applied action.
class RecordedGame {
public:
    RecordedGame(const GameConfig& config, std::shared_ptr<const Catalog> catalog);

    std::vector<Event> apply(PlayerId player, const Action& action);

    const GameState& state() const noexcept { return state_; }
    /// Log with the current digest as final digest.
    ActionLog log() const;

private:
    GameState state_;
    ActionLog log_;
};

}  // namespace aiaudit
