#include <doctest.h>

#include <sstream>

#include "aiaudit/sim.hpp"

using namespace aiaudit;

namespace {

SimPlan plan(int games, const std::string& lineup = "random,random,random,random") {
    SimPlan p;
    p.games = games;
    p.base_seed = 99;
    p.lineup = parse_lineup(lineup);
    p.config.player_count = static_cast<int>(p.lineup.size());
    return p;
}

int lines(const std::string& text) {
    int n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("simulation is deterministic") {
    const auto p = plan(50, "random,least_harm_first,mimic,greedy_defender");
    const auto a = run(p);
    const auto b = run(p);
    CHECK(a == b);
    CHECK(emit_report(a, ReportFormat::json) == emit_report(b, ReportFormat::json));
    CHECK(a.games == 50);
    int wins = a.stalemates;
    for (const auto& [name, n] : a.wins_by_strategy) wins += n;
    CHECK(wins == 50);
    int by_seat = 0;
    for (int n : a.wins_by_seat) by_seat += n;
    CHECK(by_seat + a.stalemates == 50);
}

TEST_CASE("seat rotation") {
    const auto p = plan(4, "random,mimic,greedy_defender,backup_overlap");
    CHECK(seat_strategy(p, 0, 0).name == StrategyName::random);
    CHECK(seat_strategy(p, 1, 0).name == StrategyName::mimic);
    CHECK(seat_strategy(p, 1, 3).name == StrategyName::random);
}

TEST_CASE("report statistics") {
    MatchReport r;
    r.games = 4;
    r.turn_histogram = {{10, 1}, {20, 2}, {40, 1}};
    r.stalemates = 1;
    r.wins_by_strategy = {{"random", 3}};
    r.defense_attempts = 8;
    r.defense_successes = 2;
    CHECK(r.min_turns() == 10);
    CHECK(r.max_turns() == 40);
    CHECK(r.mean_turns() == doctest::Approx(22.5));
    CHECK(r.median_turns() == doctest::Approx(20.0));
    CHECK(r.win_rate("random") == doctest::Approx(0.75));
    CHECK(r.win_rate("mimic") == 0.0);
    CHECK(r.stalemate_rate() == doctest::Approx(0.25));
    CHECK(r.defense_success_rate() == doctest::Approx(0.25));
    r.turn_histogram = {{10, 1}, {30, 1}};
    r.games = 2;
    CHECK(r.median_turns() == doctest::Approx(20.0));
    CHECK(MatchReport{}.mean_turns() == 0.0);
}

TEST_CASE("reports round trip and render") {
    const auto r = run(plan(20));
    CHECK(report_from_json(report_to_json(r)) == r);
    const auto csv = emit_report(r, ReportFormat::csv);
    CHECK(csv.rfind("row,strategy,games,wins,win_rate,", 0) == 0);
    CHECK(lines(csv) == 3);  // header, one strategy, summary
    CHECK(csv.find("\nsummary,") != std::string::npos);
}

TEST_CASE("paired comparison") {
    const auto a = plan(40);
    SUBCASE("identical configs give zero deltas") {
        const auto paired = compare(a, a);
        CHECK(paired.mean_turns_delta() == 0.0);
        CHECK(paired.defense_success_rate_delta() == 0.0);
        CHECK(paired.stalemate_rate_delta() == 0.0);
    }
    SUBCASE("plans must differ only in config") {
        auto b = a;
        b.base_seed += 1;
        CHECK_THROWS_AS(compare(a, b), std::invalid_argument);
        b = a;
        b.lineup = parse_lineup("mimic,mimic,mimic,mimic");
        CHECK_THROWS_AS(compare(a, b), std::invalid_argument);
    }
    SUBCASE("exchange keeps games from stalling") {
        auto off = a;
        off.games = 200;
        off.config.harm_exchange_enabled = false;
        off.config.turn_cap = 200;
        auto on = off;
        on.config.harm_exchange_enabled = true;
        const auto paired = compare(off, on);
        CHECK(paired.b.stalemates <= paired.a.stalemates);
    }
    SUBCASE("paired csv") {
        auto b = a;
        b.config.initial_feature_hand = 2;
        const auto csv = emit_paired(compare(a, b), ReportFormat::csv);
        CHECK(csv.find("\ndelta,") != std::string::npos);
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);
        const auto columns = std::count(line.begin(), line.end(), ',');
        while (std::getline(in, line)) CHECK(std::count(line.begin(), line.end(), ',') == columns);
    }
}

TEST_CASE("plans") {
    const auto p = parse_plan(
        "games: 12\n"
        "base_seed: 5\n"
        "config:\n"
        "  player_count: 3\n"
        "  initial_feature_hand: 2\n"
        "lineup:\n"
        "  - random\n"
        "  - name: mimic\n"
        "    weights: {aggression: 0.5}\n"
        "  - greedy_defender\n");
    CHECK(p.games == 12);
    CHECK(p.base_seed == 5);
    CHECK(p.config.initial_feature_hand == 2);
    REQUIRE(p.lineup.size() == 3);
    CHECK(p.lineup[1].weights.at("aggression") == 0.5);
    CHECK(plan_from_json(plan_to_json(p)) == p);
    CHECK_THROWS(parse_plan("games: 3\nlineup: [random, random]\nturbo: true\n"));

    auto bad = plan(1);
    bad.config.player_count = 3;
    CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
    bad = plan(0);
    CHECK_THROWS_AS(validate_plan(bad), std::invalid_argument);
}
