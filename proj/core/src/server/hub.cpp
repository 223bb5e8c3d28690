#include "aiaudit/server/hub.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <random>
#include <vector>

#include "aiaudit/bots.hpp"
#include "aiaudit/engine.hpp"
#include "aiaudit/replay.hpp"
#include "aiaudit/rng.hpp"
#include "aiaudit/serialize.hpp"
#include "aiaudit/view.hpp"

namespace aiaudit::server {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxNarrative = 500;

struct Client {
    ConnectionId id = 0;
    Outbox outbox;
    std::mutex m;
    std::uint64_t seq = 0;

    void send(std::string_view type, const std::string& game_id, json payload,
              std::optional<std::int64_t> reply_to = std::nullopt) {
        json msg{{"type", type}, {"payload", std::move(payload)}};
        if (!game_id.empty()) msg["game_id"] = game_id;
        if (reply_to) msg["reply_to"] = *reply_to;
        std::lock_guard lock(m);
        msg["msg_id"] = ++seq;
        outbox(msg.dump());
    }

    void error(std::string_view code, const std::string& text, std::optional<std::int64_t> reply_to,
               json extra = json::object()) {
        extra["code"] = code;
        extra["text"] = text;
        send("error", "", std::move(extra), reply_to);
    }
};

using ClientPtr = std::shared_ptr<Client>;

struct Connection {
    ClientPtr client;
    bool greeted = false;
    std::string token;
    std::optional<std::int64_t> last_msg_id;
};

enum class SeatKind { open, human, bot };

struct Seat {
    SeatKind kind = SeatKind::open;
    std::string name;
    std::string token;
    ClientPtr client;
    std::optional<Clock::time_point> disconnected_at;
    Strategy strategy;
    std::optional<BotContext> bot;
};

struct Watcher {
    std::string name;
    ViewerRole role = ViewerRole::spectator;
    ClientPtr client;
};

struct Session {
    std::mutex m;
    std::string id;
    GameConfig config;
    std::string catalog_name;
    std::shared_ptr<const Catalog> catalog;
    std::string creator_token;
    std::vector<Seat> seats;
    std::map<std::string, Watcher> watchers;  // by token
    std::optional<RecordedGame> game;
    std::optional<Clock::time_point> vote_deadline;
    Clock::time_point last_activity;
    bool expired = false;

    bool started() const { return game.has_value(); }
    bool over() const { return game && std::holds_alternative<Terminal>(game->state().phase); }

    std::optional<PlayerId> seat_of(const std::string& token) const {
        for (std::size_t i = 0; i < seats.size(); ++i) {
            if (seats[i].kind == SeatKind::human && seats[i].token == token) return static_cast<PlayerId>(i);
        }
        return std::nullopt;
    }

    bool is_member(const std::string& token) const { return seat_of(token) || watchers.contains(token); }

    std::optional<PlayerId> open_seat() const {
        for (std::size_t i = 0; i < seats.size(); ++i) {
            if (seats[i].kind == SeatKind::open) return static_cast<PlayerId>(i);
        }
        return std::nullopt;
    }
};

using SessionPtr = std::shared_ptr<Session>;

std::string_view seat_kind_name(SeatKind k) {
    switch (k) {
        case SeatKind::open: return "open";
        case SeatKind::human: return "human";
        case SeatKind::bot: return "bot";
    }
    return "open";
}

std::string_view role_text(ViewerRole r) {
    switch (r) {
        case ViewerRole::player: return "player";
        case ViewerRole::spectator: return "spectator";
        case ViewerRole::educator: return "educator";
    }
    return "spectator";
}

std::string_view wire_code(EngineErrc code) {
    switch (code) {
        case EngineErrc::wrong_phase:
        case EngineErrc::not_your_turn: return "not_your_phase";
        case EngineErrc::illegal_action: return "illegal_action";
        case EngineErrc::unknown_player: return "unknown_player";
        default: return "bad_request";
    }
}

std::size_t narrative_length(const Action& action) {
    return std::visit(
        [](const auto& a) -> std::size_t {
            if constexpr (requires { a.narrative; }) {
                return a.narrative.size();
            } else {
                return 0;
            }
        },
        action);
}

struct RequestError {
    std::string code;
    std::string text;
    json extra = json::object();
};

}  // namespace

struct Hub::Impl {
    HubOptions options;
    mutable std::mutex m;
    std::map<ConnectionId, Connection> connections;
    ConnectionId next_connection = 1;
    std::map<std::string, std::string> tokens;  // resume token -> game id ("" before joining)
    std::map<std::string, SessionPtr> sessions;
    std::set<std::string> expired_games;
    Rng token_rng;

    explicit Impl(HubOptions o) : options(std::move(o)), token_rng(0) {
        std::uint64_t seed = options.token_seed;
        if (seed == 0) {
            std::random_device rd;
            seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }
        token_rng = Rng(seed);
        if (!options.seed_source) {
            options.seed_source = [] {
                std::random_device rd;
                return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            };
        }
    }

    Clock::time_point now() const { return options.clock(); }

    // Caller holds m.
    std::string new_token(std::string_view prefix, int words) {
        std::string out(prefix);
        char buf[17];
        for (int i = 0; i < words; ++i) {
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(token_rng.next()));
            out += buf;
        }
        return out;
    }

    // ------------------------------------------------------------------
    // Session messaging. Callers hold the session mutex.

    json lobby_payload(const Session& s, const std::string& token) const {
        json seats = json::array();
        for (std::size_t i = 0; i < s.seats.size(); ++i) {
            const auto& seat = s.seats[i];
            json entry{{"seat", i}, {"kind", seat_kind_name(seat.kind)}, {"name", seat.name}};
            if (seat.kind == SeatKind::bot) entry["strategy"] = strategy_name(seat.strategy.name);
            if (seat.kind == SeatKind::human) entry["connected"] = seat.client != nullptr;
            seats.push_back(std::move(entry));
        }
        json you{{"role", "none"}};
        if (const auto seat = s.seat_of(token)) {
            you = {{"role", "player"}, {"seat", *seat}};
        } else if (const auto it = s.watchers.find(token); it != s.watchers.end()) {
            you = {{"role", role_text(it->second.role)}};
        }
        return {{"game_id", s.id},
                {"player_count", s.config.player_count},
                {"catalog", s.catalog_name},
                {"config", [&] {
                     auto c = config_to_json(s.config);
                     c.erase("seed");
                     return c;
                 }()},
                {"seats", seats},
                {"spectators", s.watchers.size()},
                {"creator", s.creator_token == token},
                {"started", s.started()},
                {"over", s.over()},
                {"you", you}};
    }

    void send_lobby(Session& s) {
        for (auto& seat : s.seats) {
            if (seat.kind == SeatKind::human && seat.client) seat.client->send("lobby", s.id, lobby_payload(s, seat.token));
        }
        for (auto& [token, w] : s.watchers) {
            if (w.client) w.client->send("lobby", s.id, lobby_payload(s, token));
        }
    }

    json event_payload(const Session& s, const Event& e) const {
        json out = event_to_json(e);
        if (e.type == EventType::challenge && e.business) {
            const auto& catalog = *s.catalog;
            out["business_title"] = catalog.business(e.business->kind).title;
            out["harm_title"] = e.harm_kind == 0 ? std::string("Wild Harm") : catalog.harm(e.harm_kind).title;
            if (e.harm_kind != 0) {
                if (auto excerpt = guide_excerpt(catalog, e.business->kind, e.harm_kind)) out["guide_excerpt"] = *excerpt;
            }
        }
        return out;
    }

    void send_view(Session& s, const ClientPtr& client, const Viewer& viewer, bool with_log) {
        const auto view = view_for(s.game->state(), viewer, ViewOptions{.include_log = with_log});
        client->send("view", s.id, view_to_json(view));
    }

    void send_game_over(Session& s, const ClientPtr& client) {
        const auto& state = s.game->state();
        const auto log = s.game->log();
        client->send("game_over", s.id,
                     {{"outcome", outcome_to_json(*is_terminal(state))},
                      {"seed", s.config.seed},
                      {"final_digest", digest_hex(*log.final_digest)},
                      {"action_log", action_log_to_json(log)}});
    }

    void broadcast(Session& s, const std::vector<Event>& events) {
        for (std::size_t i = 0; i < s.seats.size(); ++i) {
            auto& seat = s.seats[i];
            if (seat.kind != SeatKind::human || !seat.client) continue;
            const auto viewer = Viewer::seat(static_cast<PlayerId>(i));
            for (const auto& e : events) {
                if (visible_to(e, viewer)) seat.client->send("event", s.id, event_payload(s, e));
            }
            send_view(s, seat.client, viewer, false);
        }
        for (auto& [token, w] : s.watchers) {
            if (!w.client) continue;
            const Viewer viewer{w.role, -1};
            for (const auto& e : events) {
                if (visible_to(e, viewer)) w.client->send("event", s.id, event_payload(s, e));
            }
            send_view(s, w.client, viewer, false);
        }
        if (s.over()) {
            for (auto& seat : s.seats) {
                if (seat.kind == SeatKind::human && seat.client) send_game_over(s, seat.client);
            }
            for (auto& [token, w] : s.watchers) {
                if (w.client) send_game_over(s, w.client);
            }
        }
    }

    // Applies one move and tells everyone. Throws EngineError unchanged.
    void step(Session& s, PlayerId player, const Action& action) {
        const auto events = s.game->apply(player, action);
        const bool vote_opened = std::any_of(events.begin(), events.end(),
                                             [](const Event& e) { return e.type == EventType::vote_opened; });
        if (std::holds_alternative<AwaitingVote>(s.game->state().phase)) {
            if (vote_opened || !s.vote_deadline) s.vote_deadline = now() + options.vote_timeout;
        } else {
            s.vote_deadline.reset();
        }
        s.last_activity = now();
        if (options.on_state) options.on_state(s.id, s.game->state());
        broadcast(s, events);
    }

    void run_bots(Session& s) {
        while (s.game && !s.over()) {
            const auto awaiting = awaiting_players(s.game->state());
            auto it = std::find_if(awaiting.begin(), awaiting.end(), [&](PlayerId p) {
                return s.seats[static_cast<std::size_t>(p)].kind == SeatKind::bot;
            });
            if (it == awaiting.end()) return;
            auto& seat = s.seats[static_cast<std::size_t>(*it)];
            const auto view = view_for(s.game->state(), Viewer::seat(*it), ViewOptions{.include_log = false});
            step(s, *it, choose_action(*seat.bot, view));
        }
    }

    void make_bot(Session& s, std::size_t index, Strategy strategy) {
        auto& seat = s.seats[index];
        seat.kind = SeatKind::bot;
        seat.name = "bot " + std::string(strategy_name(strategy.name));
        seat.strategy = strategy;
        seat.client.reset();
        seat.disconnected_at.reset();
        if (s.started()) {
            seat.bot.emplace(strategy, split_seed(s.config.seed, 1 + index), s.catalog);
        }
    }

    void start_game(Session& s) {
        s.config.seed = options.seed_source();
        s.game.emplace(s.config, s.catalog);
        for (std::size_t i = 0; i < s.seats.size(); ++i) {
            auto& seat = s.seats[i];
            if (seat.kind == SeatKind::bot) seat.bot.emplace(seat.strategy, split_seed(s.config.seed, 1 + i), s.catalog);
        }
        s.last_activity = now();
        if (options.on_state) options.on_state(s.id, s.game->state());
        send_lobby(s);
        for (std::size_t i = 0; i < s.seats.size(); ++i) {
            auto& seat = s.seats[i];
            if (seat.kind == SeatKind::human && seat.client) {
                send_view(s, seat.client, Viewer::seat(static_cast<PlayerId>(i)), true);
            }
        }
        for (auto& [token, w] : s.watchers) {
            if (w.client) send_view(s, w.client, Viewer{w.role, -1}, true);
        }
        run_bots(s);
    }

    // ------------------------------------------------------------------
    // Requests

    SessionPtr find_session(const std::string& game_id) {
        std::lock_guard lock(m);
        const auto it = sessions.find(game_id);
        if (it != sessions.end()) return it->second;
        if (expired_games.contains(game_id)) throw RequestError{"session_expired", "game " + game_id + " has expired"};
        throw RequestError{"unknown_game", "no game '" + game_id + "'"};
    }

    static std::string game_id_of(const json& envelope) {
        if (envelope.contains("game_id") && envelope.at("game_id").is_string()) return envelope.at("game_id");
        const auto& payload = envelope.at("payload");
        if (payload.contains("game_id") && payload.at("game_id").is_string()) return payload.at("game_id");
        throw RequestError{"unknown_game", "message names no game"};
    }

    void bind_token(const std::string& token, const std::string& game_id) {
        std::lock_guard lock(m);
        tokens[token] = game_id;
    }

    void handle_create(const ClientPtr& client, const std::string& token, const json& payload, std::int64_t msg_id) {
        GameConfig config;
        try {
            config = config_from_json(payload.value("config", json::object()));
            validate_config(config);
        } catch (const std::invalid_argument& e) {
            throw RequestError{"invalid_config", e.what()};
        } catch (const EngineError& e) {
            throw RequestError{"invalid_config", e.what()};
        }
        const std::string catalog_name = payload.value("catalog", "default");
        const auto cat = options.catalogs.find(catalog_name);
        if (cat == options.catalogs.end()) throw RequestError{"unknown_catalog", "no catalog '" + catalog_name + "'"};
        const std::string role = payload.value("role", "player");
        if (role != "player" && role != "educator" && role != "spectator") {
            throw RequestError{"bad_request", "unknown role '" + role + "'"};
        }
        std::vector<Strategy> bots;
        if (payload.contains("bots")) {
            try {
                for (const auto& b : payload.at("bots")) bots.push_back(parse_lineup(b.get<std::string>()).front());
            } catch (const std::exception& e) {
                throw RequestError{"unknown_strategy", e.what()};
            }
        }
        const int humans = role == "player" ? 1 : 0;
        if (humans + static_cast<int>(bots.size()) > config.player_count) {
            throw RequestError{"full_lobby", "more bots than open seats"};
        }

        auto s = std::make_shared<Session>();
        s->config = config;
        s->catalog_name = catalog_name;
        s->catalog = cat->second;
        s->creator_token = token;
        s->seats.resize(static_cast<std::size_t>(config.player_count));
        s->last_activity = now();
        const std::string name = payload.value("name", "player");
        if (role == "player") {
            s->seats[0] = Seat{SeatKind::human, name, token, client, std::nullopt, {}, std::nullopt};
        } else {
            s->watchers[token] = Watcher{name, role == "educator" ? ViewerRole::educator : ViewerRole::spectator, client};
        }
        for (std::size_t i = 0; i < bots.size(); ++i) make_bot(*s, static_cast<std::size_t>(humans) + i, bots[i]);
        {
            std::lock_guard lock(m);
            s->id = new_token("g-", 1);
            sessions[s->id] = s;
            tokens[token] = s->id;
        }
        std::lock_guard lock(s->m);
        send_lobby(*s);
        client->send("ack", s->id, {{"created", s->id}}, msg_id);
    }

    void handle_join(const ClientPtr& client, const std::string& token, const std::string& game_id,
                     const json& payload, std::int64_t msg_id) {
        auto s = find_session(game_id);
        std::lock_guard lock(s->m);
        if (s->is_member(token)) throw RequestError{"already_joined", "already in game " + game_id};
        const std::string role = payload.value("role", "player");
        const std::string name = payload.value("name", "player");
        if (role == "spectator" || role == "educator") {
            s->watchers[token] = Watcher{name, role == "educator" ? ViewerRole::educator : ViewerRole::spectator, client};
        } else if (role == "player") {
            if (s->started()) {
                throw RequestError{"game_started", "game " + game_id + " has started; join as a spectator instead",
                                   {{"spectate", true}}};
            }
            const auto open = s->open_seat();
            if (!open) throw RequestError{"full_lobby", "game " + game_id + " has no open seat"};
            s->seats[static_cast<std::size_t>(*open)] = Seat{SeatKind::human, name, token, client, std::nullopt, {}, std::nullopt};
        } else {
            throw RequestError{"bad_request", "unknown role '" + role + "'"};
        }
        bind_token(token, game_id);
        s->last_activity = now();
        send_lobby(*s);
        if (s->started()) {
            const auto& w = s->watchers.at(token);
            send_view(*s, client, Viewer{w.role, -1}, true);
            if (s->over()) send_game_over(*s, client);
        }
        client->send("ack", game_id, json::object(), msg_id);
    }

    void handle_add_bot(const ClientPtr& client, const std::string& token, const std::string& game_id,
                        const json& payload, std::int64_t msg_id) {
        auto s = find_session(game_id);
        std::lock_guard lock(s->m);
        if (s->creator_token != token) throw RequestError{"not_creator", "only the creator may add bots"};
        if (s->started()) throw RequestError{"game_started", "game " + game_id + " has started"};
        std::vector<Strategy> lineup;
        try {
            lineup = parse_lineup(payload.value("strategy", "random"));
        } catch (const std::invalid_argument& e) {
            throw RequestError{"unknown_strategy", e.what()};
        }
        if (lineup.size() != 1) throw RequestError{"unknown_strategy", "add one bot at a time"};
        const auto open = s->open_seat();
        if (!open) throw RequestError{"full_lobby", "game " + game_id + " has no open seat"};
        make_bot(*s, static_cast<std::size_t>(*open), lineup.front());
        s->last_activity = now();
        send_lobby(*s);
        client->send("ack", game_id, {{"seat", *open}}, msg_id);
    }

    void handle_start(const ClientPtr& client, const std::string& token, const std::string& game_id,
                      std::int64_t msg_id) {
        auto s = find_session(game_id);
        std::lock_guard lock(s->m);
        if (s->creator_token != token) throw RequestError{"not_creator", "only the creator may start the game"};
        if (s->started()) throw RequestError{"game_started", "game " + game_id + " has already started"};
        if (s->open_seat()) throw RequestError{"lobby_not_full", "every seat must be filled before starting"};
        client->send("ack", game_id, json::object(), msg_id);
        start_game(*s);
    }

    void handle_move(const ClientPtr& client, const std::string& token, const std::string& game_id,
                     const Action& action, std::int64_t msg_id) {
        auto s = find_session(game_id);
        std::lock_guard lock(s->m);
        const auto seat = s->seat_of(token);
        if (!seat || !s->started()) throw RequestError{"not_your_phase", "you hold no seat in a running game " + game_id};
        if (narrative_length(action) > kMaxNarrative) {
            throw RequestError{"narrative_too_long", "narratives are limited to 500 characters"};
        }
        try {
            step(*s, *seat, action);
        } catch (const EngineError& e) {
            throw RequestError{std::string(wire_code(e.code())), e.what()};
        }
        client->send("ack", game_id, json::object(), msg_id);
        run_bots(*s);
    }

    void handle_resume(const ClientPtr& client, ConnectionId id, const json& payload, std::int64_t msg_id) {
        const std::string token = payload.value("resume_token", "");
        std::string game_id;
        {
            std::lock_guard lock(m);
            const auto it = tokens.find(token);
            if (it == tokens.end()) throw RequestError{"unknown_token", "resume token not recognised"};
            game_id = it->second;
            if (!game_id.empty() && !sessions.contains(game_id)) {
                throw RequestError{"session_expired", "game " + game_id + " has expired"};
            }
            auto& conn = connections.at(id);
            conn.greeted = true;
            conn.token = token;
        }
        client->send("welcome", game_id, {{"resume_token", token}}, msg_id);
        if (game_id.empty()) return;
        auto s = find_session(game_id);
        std::lock_guard lock(s->m);
        if (const auto seat = s->seat_of(token)) {
            auto& entry = s->seats[static_cast<std::size_t>(*seat)];
            entry.client = client;
            entry.disconnected_at.reset();
            s->last_activity = now();
            send_lobby(*s);
            if (s->started()) send_view(*s, client, Viewer::seat(*seat), true);
        } else if (auto it = s->watchers.find(token); it != s->watchers.end()) {
            it->second.client = client;
            client->send("lobby", s->id, lobby_payload(*s, token));
            if (s->started()) send_view(*s, client, Viewer{it->second.role, -1}, true);
        } else {
            // The seat was handed to a bot while away; watch instead.
            s->watchers[token] = Watcher{"former player", ViewerRole::spectator, client};
            client->send("lobby", s->id, lobby_payload(*s, token));
            if (s->started()) send_view(*s, client, Viewer::spectator(), true);
        }
        if (s->over()) send_game_over(*s, client);
    }

    void receive(ConnectionId id, std::string_view frame) {
        ClientPtr client;
        std::string token;
        bool greeted = false;
        json envelope;
        std::int64_t msg_id = 0;
        {
            std::lock_guard lock(m);
            const auto it = connections.find(id);
            if (it == connections.end()) return;
            client = it->second.client;
            try {
                envelope = json::parse(frame);
            } catch (const json::parse_error& e) {
                client->error("bad_frame", std::string("frame is not valid JSON: ") + e.what(), std::nullopt);
                return;
            }
            if (!envelope.is_object() || !envelope.contains("type") || !envelope.at("type").is_string() ||
                !envelope.contains("msg_id") || !envelope.at("msg_id").is_number_integer()) {
                client->error("bad_envelope", "envelope needs a string type and an integer msg_id", std::nullopt);
                return;
            }
            msg_id = envelope.at("msg_id").get<std::int64_t>();
            auto& conn = it->second;
            if (conn.last_msg_id && msg_id <= *conn.last_msg_id) {
                client->send("ack", "", {{"duplicate", true}}, msg_id);
                return;
            }
            conn.last_msg_id = msg_id;
            if (!envelope.contains("payload") || envelope.at("payload").is_null()) envelope["payload"] = json::object();
            greeted = conn.greeted;
            token = conn.token;
        }

        const std::string type = envelope.at("type");
        const json& payload = envelope.at("payload");
        try {
            if (!payload.is_object()) throw RequestError{"bad_envelope", "payload must be an object"};
            if (type == "hello") {
                std::string issued;
                {
                    std::lock_guard lock(m);
                    auto& conn = connections.at(id);
                    if (!conn.greeted) {
                        conn.greeted = true;
                        conn.token = new_token("t-", 2);
                        tokens[conn.token] = "";
                    }
                    issued = conn.token;
                }
                client->send("welcome", "", {{"resume_token", issued}, {"protocol", 1}}, msg_id);
                return;
            }
            if (type == "resume") return handle_resume(client, id, payload, msg_id);

            static const std::set<std::string> known{"create", "join", "add_bot", "start", "action", "vote"};
            if (!known.contains(type)) throw RequestError{"unknown_type", "unknown message type '" + type + "'"};
            if (!greeted) throw RequestError{"hello_required", "send hello or resume first"};

            if (type == "create") return handle_create(client, token, payload, msg_id);
            const std::string game_id = game_id_of(envelope);
            if (type == "join") return handle_join(client, token, game_id, payload, msg_id);
            if (type == "add_bot") return handle_add_bot(client, token, game_id, payload, msg_id);
            if (type == "start") return handle_start(client, token, game_id, msg_id);
            if (type == "vote") {
                if (!payload.contains("approve") || !payload.at("approve").is_boolean()) {
                    throw RequestError{"bad_request", "vote needs a boolean 'approve'"};
                }
                return handle_move(client, token, game_id, CastVote{payload.at("approve").get<bool>()}, msg_id);
            }
            Action action;
            try {
                action = action_from_json(payload.contains("action") ? payload.at("action") : payload);
            } catch (const std::exception& e) {
                throw RequestError{"bad_action", e.what()};
            }
            handle_move(client, token, game_id, action, msg_id);
        } catch (const RequestError& e) {
            client->error(e.code, e.text, msg_id, e.extra);
        } catch (const json::exception& e) {
            client->error("bad_request", e.what(), msg_id);
        }
    }

    void disconnect(ConnectionId id) {
        std::string token;
        std::string game_id;
        {
            std::lock_guard lock(m);
            const auto it = connections.find(id);
            if (it == connections.end()) return;
            token = it->second.token;
            connections.erase(it);
            if (const auto t = tokens.find(token); t != tokens.end()) game_id = t->second;
            if (game_id.empty() || !sessions.contains(game_id)) return;
        }
        auto s = find_session(game_id);
        std::lock_guard lock(s->m);
        if (const auto seat = s->seat_of(token)) {
            auto& entry = s->seats[static_cast<std::size_t>(*seat)];
            if (entry.client && entry.client->id == id) {
                entry.client.reset();
                entry.disconnected_at = now();
                send_lobby(*s);
            }
        } else if (auto w = s->watchers.find(token); w != s->watchers.end()) {
            if (w->second.client && w->second.client->id == id) w->second.client.reset();
        }
    }

    void tick_session(Session& s) {
        const auto t = now();
        if (s.game && !s.over()) {
            if (s.vote_deadline && t >= *s.vote_deadline) {
                // Missing human ballots count as rejections.
                const auto& vote = std::get<AwaitingVote>(s.game->state().phase).vote;
                std::vector<PlayerId> missing;
                for (PlayerId v : vote.voters) {
                    if (!vote.ballots.contains(v) && s.seats[static_cast<std::size_t>(v)].kind == SeatKind::human) {
                        missing.push_back(v);
                    }
                }
                s.vote_deadline.reset();
                for (PlayerId v : missing) {
                    if (!std::holds_alternative<AwaitingVote>(s.game->state().phase)) break;
                    step(s, v, CastVote{false});
                }
                run_bots(s);
            }
            const auto grace = options.vote_timeout * options.disconnect_timeouts;
            bool converted = false;
            for (std::size_t i = 0; i < s.seats.size(); ++i) {
                auto& seat = s.seats[i];
                if (seat.kind == SeatKind::human && !seat.client && seat.disconnected_at &&
                    t - *seat.disconnected_at >= grace) {
                    make_bot(s, i, Strategy{StrategyName::random, {}});
                    converted = true;
                }
            }
            if (converted) {
                send_lobby(s);
                run_bots(s);
            }
        }
        if (t - s.last_activity >= options.session_ttl) s.expired = true;
    }

    void tick() {
        std::vector<SessionPtr> all;
        {
            std::lock_guard lock(m);
            for (const auto& [_, s] : sessions) all.push_back(s);
        }
        std::vector<std::string> dead;
        for (const auto& s : all) {
            std::lock_guard lock(s->m);
            tick_session(*s);
            if (s->expired) dead.push_back(s->id);
        }
        if (dead.empty()) return;
        std::lock_guard lock(m);
        for (const auto& id : dead) {
            sessions.erase(id);
            expired_games.insert(id);
        }
    }
};

Hub::Hub(HubOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Hub::~Hub() = default;

ConnectionId Hub::connect(Outbox outbox) {
    std::lock_guard lock(impl_->m);
    const ConnectionId id = impl_->next_connection++;
    auto client = std::make_shared<Client>();
    client->id = id;
    client->outbox = std::move(outbox);
    impl_->connections[id] = Connection{std::move(client), false, {}, std::nullopt};
    return id;
}

void Hub::disconnect(ConnectionId id) { impl_->disconnect(id); }

void Hub::receive(ConnectionId id, std::string_view frame) { impl_->receive(id, frame); }

void Hub::tick() { impl_->tick(); }

std::size_t Hub::session_count() const {
    std::lock_guard lock(impl_->m);
    return impl_->sessions.size();
}

std::size_t Hub::connection_count() const {
    std::lock_guard lock(impl_->m);
    return impl_->connections.size();
}

json Hub::health() const {
    std::lock_guard lock(impl_->m);
    return {{"status", "ok"}, {"sessions", impl_->sessions.size()}, {"connections", impl_->connections.size()}};
}

}  // namespace aiaudit::server
