#include <benchmark/benchmark.h>

#include "aiaudit/engine.hpp"
#include "aiaudit/rng.hpp"
#include "aiaudit/view.hpp"

using namespace aiaudit;

namespace {

GameConfig config_for(int players) {
    GameConfig c;
    c.player_count = players;
    c.seed = 1;
    return c;
}

// Plays uniformly random legal moves for a fixed number of steps.
GameState advance(GameState s, int steps) {
    Rng rng(s.config.seed);
    for (int i = 0; i < steps && !is_terminal(s); ++i) {
        const auto waiting = awaiting_players(s);
        const auto p = waiting[rng.below(waiting.size())];
        auto moves = legal_actions(s, p);
        apply_in_place(s, p, moves[rng.below(moves.size())]);
    }
    return s;
}

}  // namespace

static void BM_NewGame(benchmark::State& state) {
    const auto catalog = default_catalog_ptr();
    auto config = config_for(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        ++config.seed;
        benchmark::DoNotOptimize(new_game(config, catalog));
    }
}
BENCHMARK(BM_NewGame)->Arg(2)->Arg(4)->Arg(7);

static void BM_LegalActions(benchmark::State& state) {
    const auto s = advance(new_game(config_for(4), default_catalog_ptr()), 40);
    const auto p = awaiting_players(s).front();
    for (auto _ : state) benchmark::DoNotOptimize(legal_actions(s, p));
}
BENCHMARK(BM_LegalActions);

static void BM_Apply(benchmark::State& state) {
    const auto s = advance(new_game(config_for(4), default_catalog_ptr()), 40);
    const auto p = awaiting_players(s).front();
    const auto move = legal_actions(s, p).front();
    for (auto _ : state) benchmark::DoNotOptimize(apply(s, p, move));
}
BENCHMARK(BM_Apply);

static void BM_View(benchmark::State& state) {
    const auto s = advance(new_game(config_for(4), default_catalog_ptr()), 40);
    for (auto _ : state) benchmark::DoNotOptimize(view_for(s, Viewer::seat(0)));
}
BENCHMARK(BM_View);

static void BM_Digest(benchmark::State& state) {
    const auto s = advance(new_game(config_for(4), default_catalog_ptr()), 40);
    for (auto _ : state) benchmark::DoNotOptimize(state_digest(s));
}
BENCHMARK(BM_Digest);
