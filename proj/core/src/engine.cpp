#include "aiaudit/engine.hpp"

#include <algorithm>
#include <tuple>

#include "aiaudit/hash.hpp"
#include "aiaudit/serialize.hpp"

namespace aiaudit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw EngineError(EngineErrc::invalid_config, what);
}

bool take(std::vector<CardUid>& cards, const CardUid& uid) {
    auto it = std::find(cards.begin(), cards.end(), uid);
    if (it == cards.end()) return false;
    cards.erase(it);
    return true;
}

// Mutation context for one transition; collects events into both the state
// log and the returned list.
struct Step {
    GameState& s;
    std::vector<Event> events;

    void emit(Event e) {
        e.turn = s.turn_counter;
        s.event_log.push_back(e);
        events.push_back(std::move(e));
    }

    PlayerZones& zones_of(PlayerId p) { return s.zones.players[static_cast<std::size_t>(p)]; }

    void draw_harm(PlayerId p) {
        if (s.zones.harm_deck.empty()) return;
        const CardUid card = s.zones.harm_deck.front();
        s.zones.harm_deck.pop_front();
        zones_of(p).harm_hand.push_back(card);
        emit({.type = EventType::card_drawn, .audience = p, .actor = p, .card = card, .harm_kind = card.kind});
    }

    void draw_feature(PlayerId p) {
        if (s.zones.feature_deck.empty()) return;
        const CardUid card = s.zones.feature_deck.front();
        s.zones.feature_deck.pop_front();
        zones_of(p).feature_hand.push_back(card);
        emit({.type = EventType::card_drawn, .audience = p, .actor = p, .card = card, .feature_kind = card.kind});
    }

    std::vector<PlayerId> active_players() const {
        std::vector<PlayerId> out;
        for (PlayerId p : s.turn_order) {
            if (!s.is_eliminated(p)) out.push_back(p);
        }
        return out;
    }

    void open_vote(VoteSubject subject, PlayerId proposer, const Challenge& challenge,
                   std::optional<CardUid> defense_card, std::string defense_narrative) {
        VoteContext vote;
        vote.subject = subject;
        vote.proposer = proposer;
        for (PlayerId p : active_players()) {
            if (p != proposer) vote.voters.push_back(p);
        }
        vote.pending = challenge;
        vote.defense_card = defense_card;
        vote.defense_narrative = defense_narrative;
        Event e{.type = EventType::vote_opened, .actor = proposer, .count = static_cast<int>(vote.voters.size())};
        e.text = subject == VoteSubject::wild_harm_validity ? challenge.narrative : defense_narrative;
        e.harm_kind = challenge.harm.kind;
        if (defense_card) e.feature_kind = defense_card->kind;
        e.business = challenge.target;
        e.other = challenge.defender;
        emit(std::move(e));
        s.phase = AwaitingVote{std::move(vote)};
    }

    void resolve_success(const Challenge& c, const CardUid& feature) {
        s.zones.harm_deck.push_back(c.harm);
        s.zones.feature_deck.push_back(feature);
        emit({.type = EventType::defense_succeeded,
              .actor = c.defender,
              .other = c.challenger,
              .business = c.target,
              .harm_kind = c.harm.kind,
              .feature_kind = feature.kind});
        draw_harm(c.challenger);
        draw_feature(c.defender);
        if (s.config.literal_replacement_draw) {
            draw_feature(c.challenger);
            draw_harm(c.defender);
        }
        end_turn(c.challenger);
    }

    void resolve_failure(const Challenge& c) {
        take(zones_of(c.defender).in_play, c.target);
        s.zones.business_discard.push_back(c.target);
        s.zones.harm_deck.push_back(c.harm);
        emit({.type = EventType::defense_failed,
              .actor = c.defender,
              .other = c.challenger,
              .business = c.target,
              .harm_kind = c.harm.kind});
        draw_harm(c.challenger);
        end_turn(c.challenger);
    }

    void eliminate_emptied() {
        for (PlayerId p : s.turn_order) {
            if (s.is_eliminated(p)) continue;
            auto& z = zones_of(p);
            if (!z.in_play.empty() || !z.business_hand.empty()) continue;
            s.eliminated.push_back(p);
            for (const auto& c : z.harm_hand) s.zones.harm_deck.push_back(c);
            for (const auto& c : z.feature_hand) s.zones.feature_deck.push_back(c);
            const int returned = static_cast<int>(z.harm_hand.size() + z.feature_hand.size());
            z.harm_hand.clear();
            z.feature_hand.clear();
            emit({.type = EventType::player_eliminated, .actor = p, .count = returned});
        }
    }

    std::vector<std::vector<PlayerId>> ranking(std::optional<PlayerId> winner) const {
        std::vector<std::vector<PlayerId>> groups;
        if (winner) {
            groups.push_back({*winner});
        } else {
            std::vector<PlayerId> alive = active_players();
            auto key = [&](PlayerId p) {
                const auto& z = s.zones.players[static_cast<std::size_t>(p)];
                return std::make_pair(z.in_play.size(), z.in_play.size() + z.business_hand.size());
            };
            std::stable_sort(alive.begin(), alive.end(),
                             [&](PlayerId a, PlayerId b) { return key(a) > key(b); });
            for (std::size_t i = 0; i < alive.size(); ++i) {
                if (i > 0 && key(alive[i]) == key(alive[i - 1])) {
                    groups.back().push_back(alive[i]);
                } else {
                    groups.push_back({alive[i]});
                }
            }
        }
        for (auto it = s.eliminated.rbegin(); it != s.eliminated.rend(); ++it) groups.push_back({*it});
        return groups;
    }

    void finish(Outcome outcome) {
        Event e{.type = EventType::game_over, .count = s.turn_counter};
        if (outcome.winner) e.actor = *outcome.winner;
        e.text = outcome.kind == OutcomeKind::win ? "win" : "stalemate";
        emit(std::move(e));
        s.phase = Terminal{std::move(outcome)};
    }

    void end_turn(PlayerId from) {
        eliminate_emptied();
        const auto alive = active_players();
        if (alive.size() <= 1) {
            Outcome o;
            if (alive.size() == 1) {
                o.kind = OutcomeKind::win;
                o.winner = alive.front();
            } else {
                o.kind = OutcomeKind::stalemate;
            }
            o.ranking = ranking(o.winner);
            finish(std::move(o));
            return;
        }
        ++s.turn_counter;
        if (s.turn_counter >= s.config.turn_cap) {
            finish(Outcome{.kind = OutcomeKind::stalemate, .ranking = ranking(std::nullopt)});
            return;
        }
        const auto& order = s.turn_order;
        auto pos = std::find(order.begin(), order.end(), from);
        std::size_t i = static_cast<std::size_t>(pos - order.begin());
        PlayerId next = from;
        for (std::size_t k = 1; k <= order.size(); ++k) {
            const PlayerId candidate = order[(i + k) % order.size()];
            if (!s.is_eliminated(candidate)) {
                next = candidate;
                break;
            }
        }
        emit({.type = EventType::turn_ended, .actor = from, .other = next});
        s.phase = AwaitingTurnAction{next, 0};
    }
};

EngineErrc classify(const GameState& state, PlayerId player, const Action& action) {
    return std::visit(
        overloaded{
            [&](const SetupRound& p) {
                if (!std::holds_alternative<SetupBusiness>(action)) return EngineErrc::wrong_phase;
                return p.current == player ? EngineErrc::illegal_action : EngineErrc::not_your_turn;
            },
            [&](const AwaitingTurnAction& p) {
                const bool turn_move = std::visit(
                    overloaded{[](const SetupBusiness&) { return true; },
                               [](const EndTurn&) { return true; },
                               [](const PlayHarm&) { return true; },
                               [](const PlayWildHarm&) { return true; },
                               [](const ExchangeHarm&) { return true; },
                               [](const Pass&) { return true; },
                               [](const auto&) { return false; }},
                    action);
                if (!turn_move) return EngineErrc::wrong_phase;
                return p.active == player ? EngineErrc::illegal_action : EngineErrc::not_your_turn;
            },
            [&](const AwaitingDefense& p) {
                const bool defense_move =
                    std::holds_alternative<Defend>(action) || std::holds_alternative<DefendWithNarrative>(action) ||
                    std::holds_alternative<DefendWild>(action) || std::holds_alternative<Decline>(action);
                if (!defense_move) return EngineErrc::wrong_phase;
                return p.challenge.defender == player ? EngineErrc::illegal_action
                                                      : EngineErrc::not_your_turn;
            },
            [&](const AwaitingVote& p) {
                if (!std::holds_alternative<CastVote>(action)) return EngineErrc::wrong_phase;
                const auto& v = p.vote.voters;
                const bool voter = std::find(v.begin(), v.end(), player) != v.end();
                return voter ? EngineErrc::illegal_action : EngineErrc::not_your_turn;
            },
            [&](const Terminal&) { return EngineErrc::wrong_phase; },
        },
        state.phase);
}

void check_legal(const GameState& state, PlayerId player, const Action& action) {
    if (player < 0 || player >= state.player_count()) {
        throw EngineError(EngineErrc::unknown_player, "unknown player " + std::to_string(player));
    }
    const auto legal = legal_actions(state, player);
    const bool found = std::any_of(legal.begin(), legal.end(),
                                   [&](const Action& a) { return same_move(a, action); });
    if (found && requires_narrative(action)) {
        const std::string& text = std::visit(
            overloaded{[](const PlayWildHarm& a) -> const std::string& { return a.narrative; },
                       [](const DefendWithNarrative& a) -> const std::string& { return a.narrative; },
                       [](const DefendWild& a) -> const std::string& { return a.narrative; },
                       [](const auto&) -> const std::string& {
                           static const std::string empty;
                           return empty;
                       }},
            action);
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw EngineError(EngineErrc::illegal_action,
                              std::string(action_name(action)) + " requires a narrative");
        }
        return;
    }
    if (found) return;

    const EngineErrc code = classify(state, player, action);
    std::string what;
    switch (code) {
        case EngineErrc::wrong_phase:
            what = std::string(action_name(action)) + " is not accepted during " +
                   std::string(phase_name(state.phase));
            break;
        case EngineErrc::not_your_turn:
            what = "player " + std::to_string(player) + " is not the one to act during " +
                   std::string(phase_name(state.phase));
            break;
        default:
            what = std::string(action_name(action)) + " is not legal for player " + std::to_string(player);
            break;
    }
    throw EngineError(code, what);
}

void turn_actions(const GameState& s, PlayerId player, const AwaitingTurnAction& phase,
                  std::vector<Action>& out) {
    const auto& catalog = *s.catalog;
    const auto& me = s.zones.players[static_cast<std::size_t>(player)];
    const bool forced_setup = me.in_play.empty() && !me.business_hand.empty();

    if (phase.setups_done < s.config.max_setups_per_turn) {
        for (const auto& b : me.business_hand) out.push_back(SetupBusiness{b});
    }
    if (phase.setups_done >= 1) out.push_back(EndTurn{});

    if (!forced_setup && phase.setups_done == 0) {
        bool any_regular = false;
        for (const auto& h : me.harm_hand) {
            if (h.is_wild()) continue;
            for (PlayerId opp : s.turn_order) {
                if (opp == player || s.is_eliminated(opp)) continue;
                for (const auto& b : s.zones.players[static_cast<std::size_t>(opp)].in_play) {
                    if (catalog.vulnerable(b.kind, h.kind)) {
                        out.push_back(PlayHarm{h, opp, b});
                        any_regular = true;
                    }
                }
            }
        }
        for (const auto& h : me.harm_hand) {
            if (!h.is_wild()) continue;
            for (PlayerId opp : s.turn_order) {
                if (opp == player || s.is_eliminated(opp)) continue;
                for (const auto& b : s.zones.players[static_cast<std::size_t>(opp)].in_play) {
                    out.push_back(PlayWildHarm{h, opp, b, {}});
                }
            }
        }
        if (s.config.harm_exchange_enabled && !any_regular) {
            for (const auto& h : me.harm_hand) out.push_back(ExchangeHarm{h});
        }
    }
    if (out.empty()) out.push_back(Pass{});
}

void defense_actions(const GameState& s, PlayerId player, const Challenge& c, std::vector<Action>& out) {
    const auto& me = s.zones.players[static_cast<std::size_t>(player)];
    bool matched = false;
    for (const auto& f : me.feature_hand) {
        if (f.is_wild()) {
            out.push_back(DefendWild{f, {}});
            matched = true;
        } else if (c.harm.is_wild()) {
            out.push_back(DefendWithNarrative{f, {}});
            matched = true;
        } else if (s.catalog->counters(f.kind, c.harm.kind)) {
            out.push_back(Defend{f});
            matched = true;
        }
    }
    if (s.config.decline_defense_allowed || !matched) out.push_back(Decline{});
}

}  // namespace

void validate_config(const GameConfig& c) {
    require(c.player_count >= 2 && c.player_count <= 7, "player_count must be between 2 and 7, got " +
                                                            std::to_string(c.player_count));
    require(c.initial_harm_hand >= 0, "initial_harm_hand must be >= 0");
    require(c.initial_feature_hand >= 0, "initial_feature_hand must be >= 0");
    require(c.wild_harm_copies >= 0, "wild_harm_copies must be >= 0");
    require(c.wild_feature_copies >= 0, "wild_feature_copies must be >= 0");
    require(c.harm_copies_per_kind >= 0, "harm_copies_per_kind must be >= 0");
    require(c.feature_copies_per_kind >= 0, "feature_copies_per_kind must be >= 0");
    require(c.max_setups_per_turn >= 1, "max_setups_per_turn must be >= 1");
    require(c.turn_cap >= 1, "turn_cap must be >= 1");
}

GameState new_game(const GameConfig& config, std::shared_ptr<const Catalog> catalog) {
    validate_config(config);
    if (!catalog) throw EngineError(EngineErrc::catalog_errors, "no catalog supplied");
    const auto report = validate(*catalog);
    if (!report.playable()) {
        throw EngineError(EngineErrc::catalog_errors,
                          "catalog does not validate: " + report.errors.front().message);
    }
    const int n = config.player_count;
    const int per_player = static_cast<int>(catalog->businesses().size()) / n;
    require(per_player >= 1, "catalog has fewer businesses than players");

    GameState s;
    s.config = config;
    s.catalog_fingerprint = catalog_fingerprint(*catalog);
    s.catalog = std::move(catalog);
    s.rng = Rng(config.seed);
    s.zones.players.resize(static_cast<std::size_t>(n));
    for (PlayerId p = 0; p < n; ++p) s.turn_order.push_back(p);

    std::vector<CardUid> businesses;
    for (const auto& b : s.catalog->businesses()) businesses.push_back({Family::business, b.id, 1});
    s.rng.shuffle(std::span(businesses));
    for (std::size_t i = 0; i < businesses.size(); ++i) {
        const auto p = static_cast<int>(i) / per_player;
        if (p < n) {
            s.zones.players[static_cast<std::size_t>(p)].business_hand.push_back(businesses[i]);
        } else {
            s.zones.box.push_back(businesses[i]);
        }
    }

    std::vector<CardUid> harms;
    for (const auto& h : s.catalog->harms()) {
        for (int c = 1; c <= config.harm_copies_per_kind; ++c) harms.push_back({Family::harm, h.id, c});
    }
    for (int c = 1; c <= config.wild_harm_copies; ++c) harms.push_back({Family::harm, 0, c});
    s.rng.shuffle(std::span(harms));
    s.zones.harm_deck.assign(harms.begin(), harms.end());

    std::vector<CardUid> features;
    for (const auto& f : s.catalog->features()) {
        for (int c = 1; c <= config.feature_copies_per_kind; ++c) {
            features.push_back({Family::feature, f.id, c});
        }
    }
    for (int c = 1; c <= config.wild_feature_copies; ++c) features.push_back({Family::feature, 0, c});
    s.rng.shuffle(std::span(features));
    s.zones.feature_deck.assign(features.begin(), features.end());

    s.phase = SetupRound{0};
    Step step{s, {}};
    step.emit({.type = EventType::game_started, .count = n});
    for (int r = 0; r < config.initial_harm_hand; ++r) {
        for (PlayerId p : s.turn_order) step.draw_harm(p);
    }
    for (int r = 0; r < config.initial_feature_hand; ++r) {
        for (PlayerId p : s.turn_order) step.draw_feature(p);
    }
    return s;
}

std::vector<Action> legal_actions(const GameState& s, PlayerId player) {
    std::vector<Action> out;
    if (player < 0 || player >= s.player_count() || s.is_eliminated(player)) return out;
    std::visit(overloaded{
                   [&](const SetupRound& p) {
                       if (p.current != player) return;
                       for (const auto& b : s.zones.players[static_cast<std::size_t>(player)].business_hand) {
                           out.push_back(SetupBusiness{b});
                       }
                   },
                   [&](const AwaitingTurnAction& p) {
                       if (p.active == player) turn_actions(s, player, p, out);
                   },
                   [&](const AwaitingDefense& p) {
                       if (p.challenge.defender == player) defense_actions(s, player, p.challenge, out);
                   },
                   [&](const AwaitingVote& p) {
                       const auto& v = p.vote;
                       if (std::find(v.voters.begin(), v.voters.end(), player) == v.voters.end()) return;
                       if (v.ballots.contains(player)) return;
                       out.push_back(CastVote{true});
                       out.push_back(CastVote{false});
                   },
                   [](const Terminal&) {},
               },
               s.phase);
    return out;
}

std::vector<PlayerId> awaiting_players(const GameState& s) {
    std::vector<PlayerId> out;
    std::visit(overloaded{
                   [&](const SetupRound& p) { out.push_back(p.current); },
                   [&](const AwaitingTurnAction& p) { out.push_back(p.active); },
                   [&](const AwaitingDefense& p) { out.push_back(p.challenge.defender); },
                   [&](const AwaitingVote& p) {
                       for (PlayerId v : p.vote.voters) {
                           if (!p.vote.ballots.contains(v)) out.push_back(v);
                       }
                   },
                   [](const Terminal&) {},
               },
               s.phase);
    return out;
}

std::vector<Event> apply_in_place(GameState& s, PlayerId player, const Action& action) {
    check_legal(s, player, action);
    Step step{s, {}};
    auto& me = step.zones_of(player);

    std::visit(
        overloaded{
            [&](const SetupBusiness& a) {
                take(me.business_hand, a.business);
                me.in_play.push_back(a.business);
                if (auto* round = std::get_if<SetupRound>(&s.phase)) {
                    step.emit({.type = EventType::business_set_up, .audience = player, .actor = player,
                               .business = a.business});
                    step.emit({.type = EventType::business_set_up, .actor = player});
                    const auto pos = std::find(s.turn_order.begin(), s.turn_order.end(), round->current);
                    const auto next = pos + 1;
                    if (next != s.turn_order.end()) {
                        round->current = *next;
                    } else {
                        for (PlayerId p : s.turn_order) {
                            for (const auto& b : step.zones_of(p).in_play) {
                                step.emit({.type = EventType::business_revealed, .actor = p, .business = b});
                            }
                        }
                        s.phase = AwaitingTurnAction{s.turn_order.front(), 0};
                    }
                } else {
                    std::get<AwaitingTurnAction>(s.phase).setups_done += 1;
                    step.emit({.type = EventType::business_set_up, .actor = player, .business = a.business});
                }
            },
            [&](const EndTurn&) { step.end_turn(player); },
            [&](const Pass&) { step.end_turn(player); },
            [&](const PlayHarm& a) {
                take(me.harm_hand, a.harm);
                Challenge c{player, a.defender, a.target, a.harm, {}};
                step.emit({.type = EventType::challenge, .actor = player, .other = a.defender,
                           .business = a.target, .harm_kind = a.harm.kind});
                s.phase = AwaitingDefense{std::move(c)};
            },
            [&](const PlayWildHarm& a) {
                take(me.harm_hand, a.harm);
                Challenge c{player, a.defender, a.target, a.harm, a.narrative};
                step.emit({.type = EventType::challenge, .actor = player, .other = a.defender,
                           .business = a.target, .harm_kind = 0, .text = a.narrative});
                step.open_vote(VoteSubject::wild_harm_validity, player, c, std::nullopt, {});
            },
            [&](const ExchangeHarm& a) {
                take(me.harm_hand, a.harm);
                s.zones.harm_deck.push_back(a.harm);
                step.emit({.type = EventType::harm_exchanged, .audience = player, .actor = player,
                           .harm_kind = a.harm.kind});
                step.emit({.type = EventType::harm_exchanged, .actor = player});
                step.draw_harm(player);
                step.end_turn(player);
            },
            [&](const Defend& a) {
                const Challenge c = std::get<AwaitingDefense>(s.phase).challenge;
                take(me.feature_hand, a.feature);
                step.resolve_success(c, a.feature);
            },
            [&](const DefendWithNarrative& a) {
                const Challenge c = std::get<AwaitingDefense>(s.phase).challenge;
                take(me.feature_hand, a.feature);
                step.open_vote(VoteSubject::narrated_feature_vs_wild_harm, player, c, a.feature, a.narrative);
            },
            [&](const DefendWild& a) {
                const Challenge c = std::get<AwaitingDefense>(s.phase).challenge;
                take(me.feature_hand, a.feature);
                step.open_vote(VoteSubject::wild_feature_adequacy, player, c, a.feature, a.narrative);
            },
            [&](const Decline&) {
                const Challenge c = std::get<AwaitingDefense>(s.phase).challenge;
                step.resolve_failure(c);
            },
            [&](const CastVote& a) {
                auto& vote = std::get<AwaitingVote>(s.phase).vote;
                vote.ballots[player] = a.approve;
                step.emit({.type = EventType::ballot_cast, .actor = player,
                           .count = static_cast<int>(vote.ballots.size())});
                if (vote.ballots.size() < vote.voters.size()) return;

                const auto approvals = static_cast<std::size_t>(
                    std::count_if(vote.ballots.begin(), vote.ballots.end(), [](const auto& kv) { return kv.second; }));
                const bool approved = approvals > vote.voters.size() / 2;
                const VoteContext done = vote;
                step.emit({.type = EventType::vote_resolved, .actor = done.proposer,
                           .approved = approved, .count = static_cast<int>(approvals),
                           .text = std::to_string(approvals) + "/" + std::to_string(done.voters.size())});
                const Challenge& c = done.pending;
                if (done.subject == VoteSubject::wild_harm_validity) {
                    if (approved) {
                        s.phase = AwaitingDefense{c};
                    } else {
                        s.zones.harm_deck.push_back(c.harm);
                        step.emit({.type = EventType::wild_spent, .actor = c.challenger, .harm_kind = 0});
                        step.draw_harm(c.challenger);
                        step.end_turn(c.challenger);
                    }
                    return;
                }
                const CardUid feature = *done.defense_card;
                if (approved) {
                    step.resolve_success(c, feature);
                } else {
                    s.zones.feature_deck.push_back(feature);
                    step.emit({.type = EventType::wild_spent, .actor = c.defender, .feature_kind = feature.kind});
                    step.draw_feature(c.defender);
                    step.resolve_failure(c);
                }
            },
        },
        action);
    return std::move(step.events);
}

Transition apply(const GameState& state, PlayerId player, const Action& action) {
    Transition t{state, {}};
    t.events = apply_in_place(t.state, player, action);
    return t;
}

std::optional<Outcome> is_terminal(const GameState& state) {
    if (const auto* t = std::get_if<Terminal>(&state.phase)) return t->outcome;
    return std::nullopt;
}

std::uint64_t state_digest(const GameState& state) {
    return fnv1a64(state_to_json(state).dump());
}

}  // namespace aiaudit
