#pragma once

#include <variant>

#include "aiaudit/engine.hpp"
#include "aiaudit/rng.hpp"

namespace randplay {

using namespace aiaudit;

/// Fills in narrative text for moves that need one.
inline Action narrated(Action a) {
    std::visit(
        [](auto& m) {
            if constexpr (requires { m.narrative; }) {
                if (m.narrative.empty()) m.narrative = "it could go wrong for the people who use it";
            }
        },
        a);
    return a;
}

struct Move {
    PlayerId player = -1;
    Action action;
};

/// Uniform choice among the awaiting players, then among their legal moves.
inline Move random_move(const GameState& s, Rng& rng) {
    const auto waiting = awaiting_players(s);
    if (waiting.empty()) return {};
    const PlayerId p = waiting[rng.below(waiting.size())];
    const auto legal = legal_actions(s, p);
    return {p, narrated(legal[rng.below(legal.size())])};
}

}  // namespace randplay
