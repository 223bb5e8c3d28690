#include <doctest.h>

#include "aiaudit/engine.hpp"
#include "aiaudit/view.hpp"
#include "oracles.hpp"
#include "random_play.hpp"
#include "state_edit.hpp"

using namespace aiaudit;
using namespace edit;

TEST_CASE("player view of a fresh four player game") {
    GameConfig c;
    c.seed = 11;
    const auto s = new_game(c, default_catalog_ptr());
    const auto v = view_for(s, Viewer::seat(2));
    CHECK(v.harm_deck_size == 32);
    CHECK(v.feature_deck_size == 4);
    CHECK(v.box_size == 2);
    CHECK(v.rules.seed == 0);
    CHECK(v.harm_hand == s.zones.players[2].harm_hand);
    CHECK(v.seats.size() == 4);
    CHECK(v.seats[0].harm_hand == 2);
    CHECK(v.legal_actions.empty());
    CHECK(view_for(s, Viewer::seat(0)).legal_actions.size() == 3);
    CHECK_THROWS_AS(view_for(s, Viewer::seat(4)), EngineError);

    const auto j = view_to_json(v);
    CHECK_FALSE(j.at("rules").contains("seed"));
    CHECK_FALSE(oracle::shows_deck_order(j));
    const auto hidden = oracle::hidden_from(s, 2);
    CHECK(oracle::leaks(j.dump(), hidden).empty());
}

TEST_CASE("setup choices stay hidden during the opening round") {
    GameConfig c;
    c.player_count = 3;
    GameState s = new_game(c, default_catalog_ptr());
    const auto b0 = s.zones.players[0].business_hand.front();
    apply_in_place(s, 0, SetupBusiness{b0});
    const auto other = view_for(s, Viewer::seat(1));
    CHECK(other.seats[0].in_play_count == 1);
    CHECK(other.seats[0].in_play.empty());
    CHECK_FALSE(oracle::mentions(view_to_json(other).dump(), b0.to_string()));
    const auto own = view_for(s, Viewer::seat(0));
    CHECK(own.seats[0].in_play == std::vector<CardUid>{b0});
}

TEST_CASE("spectators see the guide excerpt for the challenged pair") {
    GameConfig c;
    c.player_count = 2;
    GameState s = after_setup(c);
    empty_hands(s);
    for (auto& p : s.zones.players) {
        for (const auto& b : p.in_play) p.business_hand.push_back(b);
        p.in_play.clear();
    }
    put_in_play(s, 0, B(1));
    put_in_play(s, 1, B(4));
    give(s, 0, H(8));
    s.phase = AwaitingTurnAction{0, 0};
    apply_in_place(s, 0, PlayHarm{H(8), 1, B(4)});

    for (const auto& viewer : {Viewer::spectator(), Viewer::educator()}) {
        const auto v = view_for(s, viewer);
        REQUIRE(v.guide_excerpt);
        CHECK(v.guide_excerpt->find("common white names like Emily or Greg") != std::string::npos);
        CHECK(v.business_hand.empty());
        CHECK(v.harm_hand.empty());
        CHECK(v.legal_actions.empty());
    }
    const auto player = view_for(s, Viewer::seat(1));
    CHECK_FALSE(player.guide_excerpt);
    REQUIRE(player.challenge);
    CHECK(player.challenge->harm_kind == 8);
    CHECK(player.challenge->target == B(4));
}

TEST_CASE("vote tallies are counts") {
    GameConfig c;
    c.player_count = 4;
    GameState s = after_setup(c);
    empty_hands(s);
    give(s, 0, H(0));
    const auto target = s.zones.players[1].in_play.front();
    apply_in_place(s, 0, PlayWildHarm{H(0), 1, target, "story"});
    apply_in_place(s, 2, CastVote{true});
    const auto v = view_for(s, Viewer::seat(3));
    REQUIRE(v.vote);
    CHECK(v.vote->ballots_cast == 1);
    CHECK(v.vote->approvals == 1);
    CHECK(v.challenge->narrative == "story");
    const auto j = view_to_json(v).at("vote");
    CHECK_FALSE(j.contains("ballots"));
}

TEST_CASE("private events only reach their audience") {
    Event drawn{.type = EventType::card_drawn, .audience = 1, .actor = 1, .card = H(3), .harm_kind = 3};
    CHECK(visible_to(drawn, Viewer::seat(1)));
    CHECK_FALSE(visible_to(drawn, Viewer::seat(0)));
    CHECK_FALSE(visible_to(drawn, Viewer::spectator()));
    CHECK_FALSE(visible_to(drawn, Viewer::educator()));

    GameConfig c;
    c.seed = 3;
    GameState s = new_game(c, default_catalog_ptr());
    Rng rng(9);
    for (int i = 0; i < 60 && !is_terminal(s); ++i) {
        const auto m = randplay::random_move(s, rng);
        apply_in_place(s, m.player, m.action);
    }
    for (const auto& e : view_for(s, Viewer::seat(0)).log) {
        CHECK_FALSE(e.card);
        if (e.audience) CHECK(*e.audience == 0);
    }
}
