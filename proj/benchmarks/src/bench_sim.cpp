#include <benchmark/benchmark.h>

#include "aiaudit/sim.hpp"

using namespace aiaudit;

static void BM_BotGames(benchmark::State& state) {
    SimPlan plan;
    plan.lineup = parse_lineup("random,least_harm_first,mimic,greedy_defender");
    plan.config.player_count = 4;
    plan.games = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        plan.base_seed = seed++;
        benchmark::DoNotOptimize(run(plan));
    }
    state.SetItemsProcessed(state.iterations() * plan.games);
}
BENCHMARK(BM_BotGames)->Arg(1)->Arg(100)->Unit(benchmark::kMillisecond);
