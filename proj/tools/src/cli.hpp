#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aiaudit/bots.hpp"
#include "aiaudit/catalog.hpp"
#include "aiaudit/game.hpp"
#include "aiaudit/replay.hpp"
#include "aiaudit/view.hpp"

namespace aiaudit::cli {

/// "H5#2 \"Leaking ...\"" style label.
std::string card_label(const Catalog& catalog, const CardUid& card);
std::string harm_label(const Catalog& catalog, int kind);

/// One-line description of a move, naming cards by id and title.
std::string describe_action(const Catalog& catalog, const Action& action);

/// Multi-line table summary for the player at `seat`.
std::string describe_view(const Catalog& catalog, const RedactedView& view);

struct PlaySetup {
    GameConfig config;  // player_count must be bots + 1
    std::vector<Strategy> bots;
    std::shared_ptr<const Catalog> catalog;
};

struct PlayResult {
    bool finished = false;  // false when input ran out first
    ActionLog log;
};

/// Runs a terminal game: the human holds seat 0 (shown as P1) and answers
/// numbered prompts on `in`; everything is written to `out`.
PlayResult play(const PlaySetup& setup, std::istream& in, std::ostream& out);

}  // namespace aiaudit::cli
