#pragma once

// Canonical JSON forms. nlohmann::json orders object keys, so dump() of these
// values is deterministic and is what state digests hash.

#include <memory>

#include <nlohmann/json.hpp>

#include "aiaudit/game.hpp"

namespace aiaudit {

nlohmann::json config_to_json(const GameConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
GameConfig config_from_json(const nlohmann::json& j);

nlohmann::json action_to_json(const Action& action);
/// Throws std::invalid_argument on unknown types or malformed fields.
Action action_from_json(const nlohmann::json& j);

nlohmann::json event_to_json(const Event& event);
nlohmann::json outcome_to_json(const Outcome& outcome);
Outcome outcome_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const GameState& state);
GameState state_from_json(const nlohmann::json& j, std::shared_ptr<const Catalog> catalog);

}  // namespace aiaudit
