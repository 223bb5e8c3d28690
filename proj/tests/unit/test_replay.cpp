#include <doctest.h>

#include "aiaudit/replay.hpp"
#include "aiaudit/serialize.hpp"
#include "aiaudit/structured_text.hpp"
#include "bot_game.hpp"

using namespace aiaudit;

namespace {

ActionLog sample_log(std::uint64_t seed = 42) {
    GameConfig c;
    c.seed = seed;
    return botgame::play(c, parse_lineup("random,least_harm_first,mimic,greedy_defender")).log();
}

}  // namespace

TEST_CASE("recorded games replay to the same digest") {
    const auto log = sample_log();
    REQUIRE(log.final_digest);
    const auto s = replay(log, default_catalog_ptr());
    CHECK(state_digest(s) == *log.final_digest);
    CHECK(is_terminal(s));
}

TEST_CASE("action logs survive both text forms") {
    const auto log = sample_log();
    CHECK(action_log_from_json(action_log_to_json(log)) == log);
    const auto text = serialize_action_log(log);
    CHECK(parse_action_log(text) == log);
    CHECK(serialize_action_log(parse_action_log(text)) == text);
}

TEST_CASE("tampered logs are caught") {
    auto log = sample_log();
    SUBCASE("different action") {
        auto& r = log.records[log.records.size() / 2];
        r.action = Pass{};
        try {
            replay(log, default_catalog_ptr());
            FAIL("replay accepted a forged record");
        } catch (const ReplayDivergence& e) {
            CHECK(e.step() <= log.records.size() / 2 + 1);
        }
    }
    SUBCASE("different seed") {
        log.config.seed ^= 1;
        CHECK_THROWS_AS(replay(log, default_catalog_ptr()), ReplayDivergence);
    }
    SUBCASE("different final digest") {
        *log.final_digest ^= 1;
        try {
            replay(log, default_catalog_ptr());
            FAIL("digest mismatch accepted");
        } catch (const ReplayDivergence& e) {
            CHECK(e.step() == log.records.size());
        }
    }
    SUBCASE("different catalog") {
        const auto& d = default_catalog();
        auto features = d.features();
        features[1].counters = {5, 6};
        auto other = std::make_shared<const Catalog>(d.businesses(), d.harms(), features, d.guide());
        CHECK_THROWS_AS(replay(log, other), ReplayDivergence);
    }
    SUBCASE("truncated log fails the digest check") {
        log.records.pop_back();
        CHECK_THROWS_AS(replay(log, default_catalog_ptr()), ReplayDivergence);
    }
}

TEST_CASE("malformed logs") {
    CHECK_THROWS_AS(parse_action_log("- just a list"), LogFormatError);
    CHECK_THROWS_AS(parse_action_log("records: ["), LogFormatError);
    auto j = action_log_to_json(sample_log());
    j["records"][0]["action"]["type"] = "teleport";
    CHECK_THROWS_AS(action_log_from_json(j), LogFormatError);
}

TEST_CASE("digests are stable across runs and machines") {
    // Regression values: a change here means recorded games no longer replay.
    GameConfig c;
    c.seed = 1;
    CHECK(digest_hex(state_digest(new_game(c, default_catalog_ptr()))) == "0x4585ad678135b6a5");
    CHECK(digest_hex(*sample_log(1).final_digest) == "0x90048bad35b8bcd3");
    CHECK(digest_hex(catalog_fingerprint(default_catalog())) == "0x0d882de9f475d23d");
}

TEST_CASE("state serialization round trip") {
    GameConfig c;
    c.seed = 8;
    RecordedGame g(c, default_catalog_ptr());
    const auto j = state_to_json(g.state());
    const auto back = state_from_json(j, default_catalog_ptr());
    CHECK(state_to_json(back) == j);
    CHECK(state_digest(back) == state_digest(g.state()));

    const auto log = sample_log(8);
    const std::vector<LogRecord> half(log.records.begin(), log.records.begin() + static_cast<long>(log.records.size() / 2));
    const auto mid = replay(log.config, default_catalog_ptr(), half);
    const auto mid_json = state_to_json(mid);
    CHECK(state_to_json(state_from_json(mid_json, default_catalog_ptr())) == mid_json);
}

TEST_CASE("config and action json") {
    GameConfig c;
    c.initial_feature_hand = 2;
    c.harm_exchange_enabled = false;
    CHECK(config_from_json(config_to_json(c)) == c);
    CHECK(config_from_json(nlohmann::json::object()) == GameConfig{});
    CHECK_THROWS_AS(config_from_json({{"players", 3}}), std::invalid_argument);

    const std::vector<Action> actions{
        SetupBusiness{CardUid::parse("B4#1")},
        EndTurn{},
        PlayHarm{CardUid::parse("H8#2"), 3, CardUid::parse("B4#1")},
        PlayWildHarm{CardUid::parse("H0#1"), 1, CardUid::parse("B12#1"), "story"},
        Defend{CardUid::parse("F2#1")},
        DefendWithNarrative{CardUid::parse("F5#2"), "team"},
        DefendWild{CardUid::parse("F0#2"), "idea"},
        Decline{},
        CastVote{true},
        ExchangeHarm{CardUid::parse("H3#3")},
        Pass{},
    };
    for (const auto& a : actions) CHECK(action_from_json(action_to_json(a)) == a);
    CHECK(action_to_json(PlayHarm{CardUid::parse("H8#2"), 3, CardUid::parse("B4#1")}) ==
          nlohmann::json{{"type", "play_harm"}, {"harm", "H8#2"}, {"defender", 3}, {"target", "B4#1"}});
    CHECK_THROWS_AS(action_from_json({{"type", "play_harm"}, {"harm", "H8#2"}}), std::invalid_argument);
    CHECK_THROWS_AS(action_from_json({{"type", "cast_vote"}, {"approve", "yes"}}), std::invalid_argument);
}

TEST_CASE("structured text") {
    const auto j = parse_structured_text("a: 1\nb: [x, \"2\", true]\nc:\n  d: 1.5\n");
    CHECK(j.at("a") == 1);
    CHECK(j.at("b")[0] == "x");
    CHECK(j.at("b")[1] == "2");
    CHECK(j.at("b")[2] == true);
    CHECK(j.at("c").at("d") == 1.5);
    CHECK(parse_structured_text(to_structured_text(j)) == j);
    const nlohmann::json tricky{{"s", "123"}, {"t", "true"}, {"u", "colon: inside"}, {"n", nullptr}};
    CHECK(parse_structured_text(to_structured_text(tricky)) == tricky);
    CHECK_THROWS_AS(parse_structured_text("a: [1, 2"), StructuredTextError);
}
