#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "aiaudit/game.hpp"

namespace aiaudit {

/// Throws EngineError(invalid_config) describing the first violated bound.
void validate_config(const GameConfig& config);

/// Deals a fresh game: businesses split evenly (extras to the box), shuffled
/// harm and feature decks, opening hands, and the hidden setup round.
GameState new_game(const GameConfig& config, std::shared_ptr<const Catalog> catalog);

/// Moves `player` may make now, in canonical order. Narrated moves appear with
/// empty narratives. Empty for players with nothing to do.
std::vector<Action> legal_actions(const GameState& state, PlayerId player);

/// Players who currently have at least one legal action.
std::vector<PlayerId> awaiting_players(const GameState& state);

struct Transition {
    GameState state;
    std::vector<Event> events;
};

/// Pure transition: returns the successor state and the events it produced.
Transition apply(const GameState& state, PlayerId player, const Action& action);

/// Same transition applied to `state`. On error the state is left unchanged.
std::vector<Event> apply_in_place(GameState& state, PlayerId player, const Action& action);

std::optional<Outcome> is_terminal(const GameState& state);

/// FNV-1a 64 over the canonical serialization of the whole state.
std::uint64_t state_digest(const GameState& state);

}  // namespace aiaudit
