#pragma once

#include <vector>

#include "aiaudit/bots.hpp"
#include "aiaudit/replay.hpp"
#include "aiaudit/view.hpp"

namespace botgame {

using namespace aiaudit;

/// Plays a whole recorded game between bots; seat i uses lineup[i % size].
inline RecordedGame play(GameConfig config, const std::vector<Strategy>& lineup,
                         std::shared_ptr<const Catalog> catalog = default_catalog_ptr()) {
    RecordedGame game(config, catalog);
    std::vector<BotContext> bots;
    for (int p = 0; p < config.player_count; ++p) {
        bots.emplace_back(lineup[static_cast<std::size_t>(p) % lineup.size()], split_seed(config.seed, 1 + p), catalog);
    }
    while (!is_terminal(game.state())) {
        const PlayerId p = awaiting_players(game.state()).front();
        const auto view = view_for(game.state(), Viewer::seat(p), ViewOptions{.include_log = false});
        game.apply(p, choose_action(bots[static_cast<std::size_t>(p)], view));
    }
    return game;
}

}  // namespace botgame
