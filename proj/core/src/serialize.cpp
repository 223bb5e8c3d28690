#include "aiaudit/serialize.hpp"

#include <set>

namespace aiaudit {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json uids(const std::vector<CardUid>& cards) {
    json out = json::array();
    for (const auto& c : cards) out.push_back(c.to_string());
    return out;
}

template <typename Container>
Container uids_from(const json& j) {
    Container out;
    for (const auto& item : j) out.push_back(CardUid::parse(item.get<std::string>()));
    return out;
}

CardUid uid_at(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw std::invalid_argument(std::string("missing card field '") + key + "'");
    }
    return CardUid::parse(j.at(key).get<std::string>());
}

std::string_view vote_subject_name(VoteSubject s) {
    switch (s) {
        case VoteSubject::wild_harm_validity: return "wild_harm_validity";
        case VoteSubject::wild_feature_adequacy: return "wild_feature_adequacy";
        case VoteSubject::narrated_feature_vs_wild_harm: return "narrated_feature_vs_wild_harm";
    }
    return "unknown";
}

VoteSubject vote_subject_from(const std::string& name) {
    if (name == "wild_harm_validity") return VoteSubject::wild_harm_validity;
    if (name == "wild_feature_adequacy") return VoteSubject::wild_feature_adequacy;
    if (name == "narrated_feature_vs_wild_harm") return VoteSubject::narrated_feature_vs_wild_harm;
    throw std::invalid_argument("unknown vote subject '" + name + "'");
}

json challenge_to_json(const Challenge& c) {
    return {{"challenger", c.challenger}, {"defender", c.defender}, {"target", c.target.to_string()},
            {"harm", c.harm.to_string()}, {"narrative", c.narrative}};
}

Challenge challenge_from_json(const json& j) {
    return {j.at("challenger").get<int>(), j.at("defender").get<int>(), uid_at(j, "target"),
            uid_at(j, "harm"), j.value("narrative", "")};
}

json phase_to_json(const Phase& phase) {
    json out = std::visit(
        overloaded{
            [](const SetupRound& p) { return json{{"current", p.current}}; },
            [](const AwaitingTurnAction& p) {
                return json{{"active", p.active}, {"setups_done", p.setups_done}};
            },
            [](const AwaitingDefense& p) { return json{{"challenge", challenge_to_json(p.challenge)}}; },
            [](const AwaitingVote& p) {
                json ballots = json::object();
                for (const auto& [voter, approve] : p.vote.ballots) ballots[std::to_string(voter)] = approve;
                json v{{"subject", vote_subject_name(p.vote.subject)},
                       {"proposer", p.vote.proposer},
                       {"voters", p.vote.voters},
                       {"ballots", ballots},
                       {"pending", challenge_to_json(p.vote.pending)},
                       {"defense_narrative", p.vote.defense_narrative}};
                v["defense_card"] = p.vote.defense_card ? json(p.vote.defense_card->to_string()) : json();
                return json{{"vote", v}};
            },
            [](const Terminal& p) { return json{{"outcome", outcome_to_json(p.outcome)}}; },
        },
        phase);
    out["kind"] = phase_name(phase);
    return out;
}

Phase phase_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "setup_round") return SetupRound{j.at("current").get<int>()};
    if (kind == "awaiting_turn_action") {
        return AwaitingTurnAction{j.at("active").get<int>(), j.at("setups_done").get<int>()};
    }
    if (kind == "awaiting_defense") return AwaitingDefense{challenge_from_json(j.at("challenge"))};
    if (kind == "awaiting_vote") {
        const auto& v = j.at("vote");
        VoteContext vote;
        vote.subject = vote_subject_from(v.at("subject").get<std::string>());
        vote.proposer = v.at("proposer").get<int>();
        vote.voters = v.at("voters").get<std::vector<int>>();
        for (const auto& [voter, approve] : v.at("ballots").items()) vote.ballots[std::stoi(voter)] = approve.get<bool>();
        vote.pending = challenge_from_json(v.at("pending"));
        if (!v.at("defense_card").is_null()) vote.defense_card = CardUid::parse(v.at("defense_card").get<std::string>());
        vote.defense_narrative = v.value("defense_narrative", "");
        return AwaitingVote{std::move(vote)};
    }
    if (kind == "terminal") return Terminal{outcome_from_json(j.at("outcome"))};
    throw std::invalid_argument("unknown phase '" + kind + "'");
}

EventType event_type_from(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(EventType::game_over); ++i) {
        const auto t = static_cast<EventType>(i);
        if (event_type_name(t) == name) return t;
    }
    throw std::invalid_argument("unknown event type '" + name + "'");
}

Event event_from_json(const json& j) {
    Event e;
    e.type = event_type_from(j.at("type").get<std::string>());
    if (j.contains("audience")) e.audience = j.at("audience").get<int>();
    e.actor = j.value("actor", -1);
    e.other = j.value("other", -1);
    if (j.contains("business")) e.business = CardUid::parse(j.at("business").get<std::string>());
    if (j.contains("card")) e.card = CardUid::parse(j.at("card").get<std::string>());
    e.harm_kind = j.value("harm_kind", -1);
    e.feature_kind = j.value("feature_kind", -1);
    if (j.contains("approved")) e.approved = j.at("approved").get<bool>();
    e.count = j.value("count", 0);
    e.text = j.value("text", "");
    e.turn = j.value("turn", 0);
    return e;
}

}  // namespace

json config_to_json(const GameConfig& c) {
    return {{"player_count", c.player_count},
            {"initial_harm_hand", c.initial_harm_hand},
            {"initial_feature_hand", c.initial_feature_hand},
            {"wild_harm_copies", c.wild_harm_copies},
            {"wild_feature_copies", c.wild_feature_copies},
            {"harm_copies_per_kind", c.harm_copies_per_kind},
            {"feature_copies_per_kind", c.feature_copies_per_kind},
            {"max_setups_per_turn", c.max_setups_per_turn},
            {"harm_exchange_enabled", c.harm_exchange_enabled},
            {"decline_defense_allowed", c.decline_defense_allowed},
            {"literal_replacement_draw", c.literal_replacement_draw},
            {"turn_cap", c.turn_cap},
            {"seed", c.seed}};
}

GameConfig config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be an object");
    static const std::set<std::string> known{
        "player_count",         "initial_harm_hand",        "initial_feature_hand",   "wild_harm_copies",
        "wild_feature_copies",  "harm_copies_per_kind",     "feature_copies_per_kind", "max_setups_per_turn",
        "harm_exchange_enabled", "decline_defense_allowed", "literal_replacement_draw", "turn_cap",
        "seed"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw std::invalid_argument("unknown config field '" + key + "'");
    }
    GameConfig c;
    try {
        c.player_count = j.value("player_count", c.player_count);
        c.initial_harm_hand = j.value("initial_harm_hand", c.initial_harm_hand);
        c.initial_feature_hand = j.value("initial_feature_hand", c.initial_feature_hand);
        c.wild_harm_copies = j.value("wild_harm_copies", c.wild_harm_copies);
        c.wild_feature_copies = j.value("wild_feature_copies", c.wild_feature_copies);
        c.harm_copies_per_kind = j.value("harm_copies_per_kind", c.harm_copies_per_kind);
        c.feature_copies_per_kind = j.value("feature_copies_per_kind", c.feature_copies_per_kind);
        c.max_setups_per_turn = j.value("max_setups_per_turn", c.max_setups_per_turn);
        c.harm_exchange_enabled = j.value("harm_exchange_enabled", c.harm_exchange_enabled);
        c.decline_defense_allowed = j.value("decline_defense_allowed", c.decline_defense_allowed);
        c.literal_replacement_draw = j.value("literal_replacement_draw", c.literal_replacement_draw);
        c.turn_cap = j.value("turn_cap", c.turn_cap);
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad config field: ") + e.what());
    }
    return c;
}

json action_to_json(const Action& action) {
    json out = std::visit(
        overloaded{
            [](const SetupBusiness& a) { return json{{"business", a.business.to_string()}}; },
            [](const EndTurn&) { return json::object(); },
            [](const PlayHarm& a) {
                return json{{"harm", a.harm.to_string()}, {"defender", a.defender}, {"target", a.target.to_string()}};
            },
            [](const PlayWildHarm& a) {
                return json{{"harm", a.harm.to_string()},
                            {"defender", a.defender},
                            {"target", a.target.to_string()},
                            {"narrative", a.narrative}};
            },
            [](const Defend& a) { return json{{"feature", a.feature.to_string()}}; },
            [](const DefendWithNarrative& a) {
                return json{{"feature", a.feature.to_string()}, {"narrative", a.narrative}};
            },
            [](const DefendWild& a) {
                return json{{"feature", a.feature.to_string()}, {"narrative", a.narrative}};
            },
            [](const Decline&) { return json::object(); },
            [](const CastVote& a) { return json{{"approve", a.approve}}; },
            [](const ExchangeHarm& a) { return json{{"harm", a.harm.to_string()}}; },
            [](const Pass&) { return json::object(); },
        },
        action);
    out["type"] = action_name(action);
    return out;
}

Action action_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw std::invalid_argument("action must be an object with a string 'type'");
    }
    const auto type = j.at("type").get<std::string>();
    auto player_at = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_number_integer()) {
            throw std::invalid_argument(std::string("missing integer field '") + key + "'");
        }
        return j.at(key).get<int>();
    };
    auto text_at = [&](const char* key) {
        if (!j.contains(key)) return std::string();
        if (!j.at(key).is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be text");
        return j.at(key).get<std::string>();
    };
    if (type == "setup_business") return SetupBusiness{uid_at(j, "business")};
    if (type == "end_turn") return EndTurn{};
    if (type == "play_harm") return PlayHarm{uid_at(j, "harm"), player_at("defender"), uid_at(j, "target")};
    if (type == "play_wild_harm") {
        return PlayWildHarm{uid_at(j, "harm"), player_at("defender"), uid_at(j, "target"), text_at("narrative")};
    }
    if (type == "defend") return Defend{uid_at(j, "feature")};
    if (type == "defend_with_narrative") return DefendWithNarrative{uid_at(j, "feature"), text_at("narrative")};
    if (type == "defend_wild") return DefendWild{uid_at(j, "feature"), text_at("narrative")};
    if (type == "decline") return Decline{};
    if (type == "cast_vote") {
        if (!j.contains("approve") || !j.at("approve").is_boolean()) {
            throw std::invalid_argument("cast_vote needs boolean 'approve'");
        }
        return CastVote{j.at("approve").get<bool>()};
    }
    if (type == "exchange_harm") return ExchangeHarm{uid_at(j, "harm")};
    if (type == "pass") return Pass{};
    throw std::invalid_argument("unknown action type '" + type + "'");
}

json event_to_json(const Event& e) {
    json out{{"type", event_type_name(e.type)}, {"turn", e.turn}};
    if (e.audience) out["audience"] = *e.audience;
    if (e.actor >= 0) out["actor"] = e.actor;
    if (e.other >= 0) out["other"] = e.other;
    if (e.business) out["business"] = e.business->to_string();
    if (e.card) out["card"] = e.card->to_string();
    if (e.harm_kind >= 0) out["harm_kind"] = e.harm_kind;
    if (e.feature_kind >= 0) out["feature_kind"] = e.feature_kind;
    if (e.approved) out["approved"] = *e.approved;
    if (e.count != 0) out["count"] = e.count;
    if (!e.text.empty()) out["text"] = e.text;
    return out;
}

json outcome_to_json(const Outcome& o) {
    json out{{"kind", o.kind == OutcomeKind::win ? "win" : "stalemate"}, {"ranking", o.ranking}};
    out["winner"] = o.winner ? json(*o.winner) : json();
    return out;
}

Outcome outcome_from_json(const json& j) {
    Outcome o;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "win") {
        o.kind = OutcomeKind::win;
    } else if (kind == "stalemate") {
        o.kind = OutcomeKind::stalemate;
    } else {
        throw std::invalid_argument("unknown outcome kind '" + kind + "'");
    }
    if (!j.at("winner").is_null()) o.winner = j.at("winner").get<int>();
    o.ranking = j.at("ranking").get<std::vector<std::vector<int>>>();
    return o;
}

json state_to_json(const GameState& s) {
    json players = json::array();
    for (const auto& p : s.zones.players) {
        players.push_back({{"business_hand", uids(p.business_hand)},
                           {"harm_hand", uids(p.harm_hand)},
                           {"feature_hand", uids(p.feature_hand)},
                           {"in_play", uids(p.in_play)}});
    }
    json log = json::array();
    for (const auto& e : s.event_log) log.push_back(event_to_json(e));
    const auto& r = s.rng.state();
    return {{"config", config_to_json(s.config)},
            {"catalog_fingerprint", s.catalog_fingerprint},
            {"zones",
             {{"harm_deck", uids({s.zones.harm_deck.begin(), s.zones.harm_deck.end()})},
              {"feature_deck", uids({s.zones.feature_deck.begin(), s.zones.feature_deck.end()})},
              {"box", uids(s.zones.box)},
              {"business_discard", uids(s.zones.business_discard)},
              {"players", players}}},
            {"turn_order", s.turn_order},
            {"eliminated", s.eliminated},
            {"phase", phase_to_json(s.phase)},
            {"turn_counter", s.turn_counter},
            {"rng_state", {r[0], r[1], r[2], r[3]}},
            {"event_log", log}};
}

GameState state_from_json(const json& j, std::shared_ptr<const Catalog> catalog) {
    GameState s;
    s.config = config_from_json(j.at("config"));
    s.catalog_fingerprint = j.at("catalog_fingerprint").get<std::uint64_t>();
    if (!catalog || catalog_fingerprint(*catalog) != s.catalog_fingerprint) {
        throw std::invalid_argument("state was recorded against a different catalog");
    }
    s.catalog = std::move(catalog);
    const auto& z = j.at("zones");
    s.zones.harm_deck = uids_from<std::deque<CardUid>>(z.at("harm_deck"));
    s.zones.feature_deck = uids_from<std::deque<CardUid>>(z.at("feature_deck"));
    s.zones.box = uids_from<std::vector<CardUid>>(z.at("box"));
    s.zones.business_discard = uids_from<std::vector<CardUid>>(z.at("business_discard"));
    for (const auto& p : z.at("players")) {
        s.zones.players.push_back({uids_from<std::vector<CardUid>>(p.at("business_hand")),
                                   uids_from<std::vector<CardUid>>(p.at("harm_hand")),
                                   uids_from<std::vector<CardUid>>(p.at("feature_hand")),
                                   uids_from<std::vector<CardUid>>(p.at("in_play"))});
    }
    s.turn_order = j.at("turn_order").get<std::vector<int>>();
    s.eliminated = j.at("eliminated").get<std::vector<int>>();
    s.phase = phase_from_json(j.at("phase"));
    s.turn_counter = j.at("turn_counter").get<int>();
    const auto r = j.at("rng_state").get<std::vector<std::uint64_t>>();
    if (r.size() != 4) throw std::invalid_argument("rng_state must have 4 words");
    s.rng = Rng(Rng::State{r[0], r[1], r[2], r[3]});
    for (const auto& e : j.at("event_log")) s.event_log.push_back(event_from_json(e));
    return s;
}

}  // namespace aiaudit
