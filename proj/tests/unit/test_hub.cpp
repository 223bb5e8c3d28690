#include <doctest.h>

#include <functional>

#include "aiaudit/engine.hpp"
#include "aiaudit/replay.hpp"
#include "aiaudit/serialize.hpp"
#include "hub_driver.hpp"
#include "random_play.hpp"

using namespace aiaudit;
using namespace aiaudit::server;
using hubtest::Client;
using nlohmann::json;

namespace {

struct Table {
    Clock::time_point now = Clock::time_point{} + std::chrono::hours(1);
    std::optional<GameState> state;
    std::unique_ptr<Hub> hub;

    explicit Table(std::chrono::milliseconds vote_timeout = std::chrono::seconds(120),
                   std::chrono::milliseconds ttl = std::chrono::hours(2)) {
        HubOptions o;
        o.vote_timeout = vote_timeout;
        o.session_ttl = ttl;
        o.clock = [this] { return now; };
        o.seed_source = [] { return std::uint64_t{12345}; };
        o.token_seed = 7;
        o.on_state = [this](const std::string&, const GameState& s) { state = s; };
        hub = std::make_unique<Hub>(std::move(o));
    }

    Client client() {
        auto c = Client::open(*hub);
        c.hello();
        return c;
    }
};

std::string code_of(const std::vector<json>& frames) {
    const auto r = Client::reply(frames);
    if (!r || r->at("type") != "error") return "";
    return r->at("payload").at("code");
}

bool acked(const std::vector<json>& frames) {
    const auto r = Client::reply(frames);
    return r && r->at("type") == "ack";
}

// Creates a two-human game between a and b and starts it.
void two_humans(Table& t, Client& a, Client& b, json config = json::object()) {
    config["player_count"] = 2;
    const auto created = a.send("create", {{"config", config}, {"name", "Ana"}});
    REQUIRE(acked(created));
    a.game_id = Client::reply(created)->at("payload").at("created");
    b.game_id = a.game_id;
    REQUIRE(acked(b.send("join", {{"name", "Ben"}})));
    REQUIRE(acked(a.send("start")));
    REQUIRE(t.state);
}

using Chooser = std::function<Action(const std::vector<Action>&)>;

Action prefer_challenge(const std::vector<Action>& legal) {
    for (const auto& a : legal) {
        if (std::holds_alternative<PlayHarm>(a) || std::holds_alternative<PlayWildHarm>(a)) return randplay::narrated(a);
    }
    for (const auto& a : legal) {
        if (std::holds_alternative<SetupBusiness>(a)) return a;
    }
    return randplay::narrated(legal.front());
}

// Plays through the wire until `stop` holds for the current state.
void play_until(Table& t, std::vector<Client*> seats, const std::function<bool(const GameState&)>& stop,
                const Chooser& choose = prefer_challenge) {
    for (int guard = 0; guard < 2000; ++guard) {
        const GameState& s = *t.state;
        if (stop(s) || is_terminal(s)) return;
        const PlayerId p = awaiting_players(s).front();
        const auto frames = seats[static_cast<std::size_t>(p)]->send("action", {{"action", action_to_json(choose(legal_actions(s, p)))}});
        REQUIRE(acked(frames));
    }
    FAIL("game did not reach the expected point");
}

}  // namespace

TEST_CASE("greeting and envelopes") {
    Table t;
    auto c = Client::open(*t.hub);
    CHECK(code_of(c.send("create")) == "hello_required");
    const auto frames = c.send("hello");
    const auto welcome = Client::last_of(frames, "welcome");
    REQUIRE(welcome);
    CHECK(welcome->at("payload").at("protocol") == 1);
    CHECK(welcome->at("payload").at("resume_token").get<std::string>().rfind("t-", 0) == 0);

    t.hub->receive(c.id, "{not json");
    CHECK(c.drain().back().at("payload").at("code") == "bad_frame");
    t.hub->receive(c.id, R"({"type":"hello"})");
    CHECK(c.drain().back().at("payload").at("code") == "bad_envelope");
    CHECK(code_of(c.send("dance")) == "unknown_type");

    const auto dup = c.send("hello", json::object(), 1);
    REQUIRE(Client::reply(dup));
    CHECK(Client::reply(dup)->at("payload").at("duplicate") == true);

    CHECK(t.hub->health() == json{{"status", "ok"}, {"sessions", 0}, {"connections", 1}});
    c.close();
    CHECK(t.hub->connection_count() == 0);
}

TEST_CASE("lobby") {
    Table t;
    auto a = t.client();
    auto b = t.client();

    CHECK(code_of(a.send("create", {{"config", {{"player_count", 9}}}})) == "invalid_config");
    CHECK(code_of(a.send("create", {{"catalog", "nope"}})) == "unknown_catalog");
    CHECK(code_of(a.send("create", {{"bots", {"psychic"}}})) == "unknown_strategy");
    CHECK(code_of(a.send("create", {{"config", {{"player_count", 2}}}, {"bots", {"random", "random"}}})) == "full_lobby");

    const auto created = a.send("create", {{"config", {{"player_count", 4}}}, {"name", "Ana"}});
    REQUIRE(acked(created));
    const auto lobby = Client::last_of(created, "lobby")->at("payload");
    CHECK(lobby.at("player_count") == 4);
    CHECK(lobby.at("seats").size() == 4);
    CHECK(lobby.at("seats")[0].at("kind") == "human");
    CHECK(lobby.at("seats")[1].at("kind") == "open");
    CHECK(lobby.at("creator") == true);
    CHECK(lobby.at("you").at("seat") == 0);
    CHECK_FALSE(lobby.at("config").contains("seed"));
    a.game_id = lobby.at("game_id");
    b.game_id = a.game_id;
    CHECK(t.hub->session_count() == 1);

    CHECK(code_of(a.send("start")) == "lobby_not_full");
    REQUIRE(acked(b.send("join", {{"name", "Ben"}})));
    CHECK(code_of(b.send("join")) == "already_joined");
    CHECK(code_of(b.send("add_bot", {{"strategy", "random"}})) == "not_creator");
    CHECK(code_of(b.send("start")) == "not_creator");
    CHECK(code_of(a.send("add_bot", {{"strategy", "oracle"}})) == "unknown_strategy");
    REQUIRE(acked(a.send("add_bot", {{"strategy", "mimic"}})));
    const auto last = a.send("add_bot", {{"strategy", "greedy_defender"}});
    REQUIRE(acked(last));
    CHECK(Client::last_of(last, "lobby")->at("payload").at("seats")[3].at("strategy") == "greedy_defender");
    CHECK(code_of(a.send("add_bot")) == "full_lobby");

    auto c = t.client();
    c.game_id = a.game_id;
    CHECK(code_of(c.send("join")) == "full_lobby");

    const auto started = a.send("start");
    REQUIRE(acked(started));
    CHECK(code_of(a.send("start")) == "game_started");
    const auto late = c.send("join", {{"role", "player"}});
    CHECK(code_of(late) == "game_started");
    CHECK(Client::reply(late)->at("payload").at("spectate") == true);
    const auto watching = c.send("join", {{"role", "spectator"}});
    REQUIRE(acked(watching));
    const auto view = Client::last_of(watching, "view");
    REQUIRE(view);
    CHECK(view->at("payload").at("viewer").at("role") == "spectator");
    CHECK(view->at("payload").at("hand").at("harm").empty());

    auto d = t.client();
    d.game_id = "g-0000000000000000";
    CHECK(code_of(d.send("join")) == "unknown_game");
}

TEST_CASE("moves over the hub") {
    Table t;
    auto a = t.client();
    auto b = t.client();
    two_humans(t, a, b);
    const auto view = a.latest("view");
    REQUIRE(view);
    CHECK(view->at("payload").at("phase") == "setup_round");
    CHECK_FALSE(view->at("payload").at("rules").contains("seed"));

    const auto& s = *t.state;
    const auto mine = s.zones.players[0].business_hand.front();
    CHECK(code_of(b.send("action", {{"action", action_to_json(SetupBusiness{mine})}})) == "not_your_phase");
    CHECK(code_of(a.send("action", {{"action", action_to_json(Decline{})}})) == "not_your_phase");
    CHECK(code_of(a.send("action", {{"action", {{"type", "setup_business"}, {"business", "B99#1"}}}})) == "illegal_action");
    CHECK(code_of(a.send("action", {{"action", {{"type", "fly"}}}})) == "bad_action");
    CHECK(code_of(a.send("vote", {{"approve", "maybe"}})) == "bad_request");

    auto outsider = t.client();
    outsider.game_id = a.game_id;
    CHECK(code_of(outsider.send("action", {{"action", action_to_json(Pass{})}})) == "not_your_phase");

    // The payload may also be the action itself.
    const auto frames = a.send("action", action_to_json(SetupBusiness{mine}));
    CHECK(acked(frames));
    CHECK(Client::last_of(b.drain(), "view").has_value());
}

TEST_CASE("challenge events carry titles and the guide excerpt") {
    Table t;
    auto a = t.client();
    auto b = t.client();
    two_humans(t, a, b);
    play_until(t, {&a, &b}, [](const GameState& s) { return std::holds_alternative<AwaitingDefense>(s.phase); });
    REQUIRE(std::holds_alternative<AwaitingDefense>(t.state->phase));
    const auto& ch = std::get<AwaitingDefense>(t.state->phase).challenge;
    json event;
    b.drain();
    for (const auto& f : b.seen) {
        if (f.at("type") == "event" && f.at("payload").at("type") == "challenge") event = f.at("payload");
    }
    REQUIRE(event.is_object());
    CHECK(event.at("business_title") == default_catalog().business(ch.target.kind).title);
    if (ch.harm.kind != 0) {
        CHECK(event.at("harm_title") == default_catalog().harm(ch.harm.kind).title);
        CHECK(event.contains("guide_excerpt") == guide_excerpt(default_catalog(), ch.target.kind, ch.harm.kind).has_value());
    } else {
        CHECK(event.at("harm_title") == "Wild Harm");
    }
}

TEST_CASE("reconnecting during a defense") {
    Table t;
    auto a = t.client();
    auto b = t.client();
    two_humans(t, a, b);
    play_until(t, {&a, &b}, [](const GameState& s) { return std::holds_alternative<AwaitingDefense>(s.phase); });
    REQUIRE(std::holds_alternative<AwaitingDefense>(t.state->phase));
    const PlayerId defender = std::get<AwaitingDefense>(t.state->phase).challenge.defender;
    Client& gone = defender == 0 ? a : b;
    gone.close();
    auto lobby = (defender == 0 ? b : a).drain();
    CHECK(Client::last_of(lobby, "lobby")->at("payload").at("seats")[defender].at("connected") == false);

    auto back = Client::open(*t.hub);
    back.game_id = gone.game_id;
    const auto frames = back.send("resume", {{"resume_token", gone.token}});
    REQUIRE(Client::last_of(frames, "welcome"));
    CHECK(Client::last_of(frames, "lobby")->at("payload").at("you").at("seat") == defender);
    const auto view = Client::last_of(frames, "view");
    REQUIRE(view);
    CHECK(view->at("payload").at("phase") == "awaiting_defense");
    CHECK_FALSE(view->at("payload").at("legal_actions").empty());
    CHECK_FALSE(view->at("payload").at("log").empty());
    CHECK(acked(back.send("action", {{"action", action_to_json(Decline{})}})));

    auto stranger = Client::open(*t.hub);
    CHECK(code_of(stranger.send("resume", {{"resume_token", "t-nothing"}})) == "unknown_token");
}

TEST_CASE("vote timeouts and abandoned seats") {
    Table t(std::chrono::seconds(10));
    auto a = t.client();
    auto b = t.client();
    // Every harm is wild, so the first player to act can open a vote.
    two_humans(t, a, b, {{"harm_copies_per_kind", 0}, {"wild_harm_copies", 10}});
    play_until(t, {&a, &b}, [](const GameState& s) { return std::holds_alternative<AwaitingVote>(s.phase); });
    REQUIRE(std::holds_alternative<AwaitingVote>(t.state->phase));
    const auto vote = std::get<AwaitingVote>(t.state->phase).vote;
    const PlayerId voter = vote.voters.front();

    t.now += std::chrono::seconds(9);
    t.hub->tick();
    CHECK(std::holds_alternative<AwaitingVote>(t.state->phase));
    t.now += std::chrono::seconds(1);
    t.hub->tick();
    CHECK_FALSE(std::holds_alternative<AwaitingVote>(t.state->phase));
    bool rejected = false;
    for (const auto& e : t.state->event_log) {
        if (e.type == EventType::vote_resolved) rejected = e.approved == false;
    }
    CHECK(rejected);

    // A seat left empty for three timeouts is handed to a bot.
    Client& gone = voter == 0 ? a : b;
    Client& stays = voter == 0 ? b : a;
    gone.close();
    t.now += std::chrono::seconds(29);
    t.hub->tick();
    CHECK(Client::last_of(stays.drain(), "lobby")->at("payload").at("seats")[voter].at("kind") == "human");
    t.now += std::chrono::seconds(1);
    t.hub->tick();
    const auto lobby = Client::last_of(stays.drain(), "lobby");
    REQUIRE(lobby);
    CHECK(lobby->at("payload").at("seats")[voter].at("kind") == "bot");

    auto back = Client::open(*t.hub);
    const auto frames = back.send("resume", {{"resume_token", gone.token}});
    CHECK(Client::last_of(frames, "lobby")->at("payload").at("you").at("role") == "spectator");
    CHECK(Client::last_of(frames, "view")->at("payload").at("viewer").at("role") == "spectator");
}

TEST_CASE("spectators resume") {
    Table t;
    auto a = t.client();
    auto b = t.client();
    two_humans(t, a, b);
    auto s = t.client();
    s.game_id = a.game_id;
    REQUIRE(acked(s.send("join", {{"role", "educator"}})));
    s.close();
    play_until(t, {&a, &b}, [](const GameState& st) { return st.turn_counter >= 2; });
    auto back = Client::open(*t.hub);
    const auto frames = back.send("resume", {{"resume_token", s.token}});
    CHECK(Client::last_of(frames, "lobby")->at("payload").at("you").at("role") == "educator");
    const auto view = Client::last_of(frames, "view");
    REQUIRE(view);
    CHECK(view->at("payload").at("viewer").at("role") == "educator");
    CHECK(view->at("payload").at("turn_counter") == t.state->turn_counter);
}

TEST_CASE("finished games broadcast a replayable log") {
    Table t;
    auto a = t.client();
    auto b = t.client();
    two_humans(t, a, b);
    play_until(t, {&a, &b}, [](const GameState&) { return false; });
    REQUIRE(is_terminal(*t.state));
    for (Client* c : {&a, &b}) {
        const auto over = c->latest("game_over");
        REQUIRE(over);
        const auto& p = over->at("payload");
        CHECK(p.at("seed") == 12345);
        const auto log = action_log_from_json(p.at("action_log"));
        CHECK(log.config.seed == 12345);
        const auto replayed = replay(log, default_catalog_ptr());
        CHECK(digest_hex(state_digest(replayed)) == p.at("final_digest"));
    }
    // Late resumes still learn the result.
    auto back = Client::open(*t.hub);
    CHECK(Client::last_of(back.send("resume", {{"resume_token", a.token}}), "game_over"));
}

TEST_CASE("idle sessions expire") {
    Table t(std::chrono::seconds(120), std::chrono::minutes(10));
    auto a = t.client();
    const auto created = a.send("create");
    const std::string game = Client::reply(created)->at("payload").at("created");
    t.now += std::chrono::minutes(10);
    t.hub->tick();
    CHECK(t.hub->session_count() == 0);
    auto b = t.client();
    b.game_id = game;
    CHECK(code_of(b.send("join")) == "session_expired");
    auto back = Client::open(*t.hub);
    CHECK(code_of(back.send("resume", {{"resume_token", a.token}})) == "session_expired");
}
