#pragma once

// Independent reference checks used by unit and acceptance tests.

#include <algorithm>
#include <cctype>
#include <span>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiaudit/engine.hpp"
#include "aiaudit/rng.hpp"
#include "aiaudit/serialize.hpp"

namespace oracle {

using namespace aiaudit;

// ---------------------------------------------------------------------------
// Legal moves, enumerated straight from the written turn rules by trying
// every candidate move built from the cards in play.

inline std::vector<std::string> canonical(const std::vector<Action>& actions) {
    std::vector<std::string> out;
    for (const auto& a : actions) out.push_back(action_to_json(a).dump());
    std::sort(out.begin(), out.end());
    return out;
}

inline bool in_hand(const std::vector<CardUid>& hand, const CardUid& c) {
    return std::find(hand.begin(), hand.end(), c) != hand.end();
}

inline std::vector<Action> brute_force_legal(const GameState& s, PlayerId me) {
    std::vector<Action> legal;
    const auto& catalog = *s.catalog;
    const int n = s.player_count();
    auto out_of_game = [&](PlayerId p) {
        return std::find(s.eliminated.begin(), s.eliminated.end(), p) != s.eliminated.end();
    };
    if (me < 0 || me >= n || out_of_game(me)) return legal;
    const auto& mine = s.zones.players[me];

    // Every card the player could name in a move.
    std::vector<CardUid> my_cards;
    for (const auto* zone : {&mine.business_hand, &mine.harm_hand, &mine.feature_hand}) {
        my_cards.insert(my_cards.end(), zone->begin(), zone->end());
    }
    std::vector<std::pair<PlayerId, CardUid>> targets;  // every running business in the game
    for (PlayerId p = 0; p < n; ++p) {
        for (const auto& b : s.zones.players[p].in_play) targets.emplace_back(p, b);
    }

    if (const auto* round = std::get_if<SetupRound>(&s.phase)) {
        if (round->current != me) return legal;
        for (const auto& c : my_cards) {
            if (c.family == Family::business) legal.push_back(SetupBusiness{c});
        }
        return legal;
    }

    if (const auto* turn = std::get_if<AwaitingTurnAction>(&s.phase)) {
        if (turn->active != me) return legal;
        const bool must_set_up = mine.in_play.empty() && !mine.business_hand.empty();
        const bool may_challenge = !must_set_up && turn->setups_done == 0;
        bool regular_harm_fits = false;

        for (const auto& c : my_cards) {
            if (c.family == Family::business && turn->setups_done < s.config.max_setups_per_turn) {
                legal.push_back(SetupBusiness{c});
            }
        }
        if (turn->setups_done >= 1) legal.push_back(EndTurn{});
        for (const auto& c : my_cards) {
            if (c.family != Family::harm || !may_challenge) continue;
            for (const auto& [owner, b] : targets) {
                if (owner == me || out_of_game(owner)) continue;
                if (c.kind == 0) {
                    continue;
                }
                const auto& vulnerable = catalog.business(b.kind).vulnerable_harms;
                if (std::find(vulnerable.begin(), vulnerable.end(), c.kind) != vulnerable.end()) {
                    legal.push_back(PlayHarm{c, owner, b});
                    regular_harm_fits = true;
                }
            }
        }
        for (const auto& c : my_cards) {
            if (c.family != Family::harm || c.kind != 0 || !may_challenge) continue;
            for (const auto& [owner, b] : targets) {
                if (owner != me && !out_of_game(owner)) legal.push_back(PlayWildHarm{c, owner, b, {}});
            }
        }
        if (may_challenge && s.config.harm_exchange_enabled && !regular_harm_fits) {
            for (const auto& c : my_cards) {
                if (c.family == Family::harm) legal.push_back(ExchangeHarm{c});
            }
        }
        if (legal.empty()) legal.push_back(Pass{});
        return legal;
    }

    if (const auto* defense = std::get_if<AwaitingDefense>(&s.phase)) {
        const auto& c = defense->challenge;
        if (c.defender != me) return legal;
        bool has_answer = false;
        for (const auto& f : my_cards) {
            if (f.family != Family::feature) continue;
            if (f.kind == 0) {
                legal.push_back(DefendWild{f, {}});
                has_answer = true;
            } else if (c.harm.kind == 0) {
                legal.push_back(DefendWithNarrative{f, {}});
                has_answer = true;
            } else {
                const auto& counters = catalog.feature(f.kind).counters;
                if (std::find(counters.begin(), counters.end(), c.harm.kind) != counters.end()) {
                    legal.push_back(Defend{f});
                    has_answer = true;
                }
            }
        }
        if (s.config.decline_defense_allowed || !has_answer) legal.push_back(Decline{});
        return legal;
    }

    if (const auto* vote = std::get_if<AwaitingVote>(&s.phase)) {
        const auto& v = vote->vote;
        const bool voter = std::find(v.voters.begin(), v.voters.end(), me) != v.voters.end();
        if (voter && v.ballots.count(me) == 0) {
            legal.push_back(CastVote{true});
            legal.push_back(CastVote{false});
        }
    }
    return legal;
}

// ---------------------------------------------------------------------------
// Random small positions: two players, at most four cards per hand.

inline std::vector<CardUid> full_box(const Catalog& catalog, const GameConfig& c) {
    std::vector<CardUid> all;
    for (const auto& b : catalog.businesses()) all.push_back({Family::business, b.id, 1});
    for (const auto& h : catalog.harms()) {
        for (int i = 1; i <= c.harm_copies_per_kind; ++i) all.push_back({Family::harm, h.id, i});
    }
    for (int i = 1; i <= c.wild_harm_copies; ++i) all.push_back({Family::harm, 0, i});
    for (const auto& f : catalog.features()) {
        for (int i = 1; i <= c.feature_copies_per_kind; ++i) all.push_back({Family::feature, f.id, i});
    }
    for (int i = 1; i <= c.wild_feature_copies; ++i) all.push_back({Family::feature, 0, i});
    return all;
}

inline GameState random_small_state(Rng& rng, std::shared_ptr<const Catalog> catalog) {
    GameConfig config;
    config.player_count = 2;
    config.wild_harm_copies = 2;
    config.harm_exchange_enabled = rng.below(4) != 0;
    config.decline_defense_allowed = rng.below(3) != 0;
    config.max_setups_per_turn = 1 + static_cast<int>(rng.below(3));
    config.seed = rng.next();
    GameState s = new_game(config, catalog);

    // Re-deal every card at random into the zones.
    std::vector<CardUid> pool = full_box(*catalog, config);
    rng.shuffle(std::span<CardUid>(pool));
    std::vector<CardUid> businesses, harms, features;
    for (const auto& c : pool) {
        (c.family == Family::business ? businesses : c.family == Family::harm ? harms : features).push_back(c);
    }
    s.zones = {};
    s.zones.players.resize(2);
    auto take = [](std::vector<CardUid>& from, std::size_t k, std::vector<CardUid>& to) {
        for (std::size_t i = 0; i < k && !from.empty(); ++i) {
            to.push_back(from.back());
            from.pop_back();
        }
    };
    for (auto& p : s.zones.players) {
        take(businesses, rng.below(5), p.business_hand);
        take(businesses, rng.below(4), p.in_play);
        take(harms, rng.below(5), p.harm_hand);
        take(features, rng.below(5), p.feature_hand);
    }
    take(businesses, rng.below(3), s.zones.business_discard);
    s.zones.box = businesses;
    s.zones.harm_deck.assign(harms.begin(), harms.end());
    s.zones.feature_deck.assign(features.begin(), features.end());
    s.eliminated.clear();
    s.turn_counter = static_cast<int>(rng.below(20));

    const PlayerId a = static_cast<PlayerId>(rng.below(2));
    const PlayerId b = 1 - a;
    switch (rng.below(5)) {
        case 0:
            s.phase = SetupRound{a};
            break;
        case 1:
            s.phase = AwaitingTurnAction{a, static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_setups_per_turn) + 1))};
            break;
        case 2: {
            auto& defender = s.zones.players[b];
            if (defender.in_play.empty()) take(s.zones.box, 1, defender.in_play);
            const CardUid target = defender.in_play[rng.below(defender.in_play.size())];
            CardUid harm{Family::harm, rng.below(3) == 0 ? 0 : 1 + static_cast<int>(rng.below(13)), 3};
            if (harm.kind == 0) harm.copy = 2;
            // Take that exact card out of wherever it sits.
            auto& deck = s.zones.harm_deck;
            auto it = std::find(deck.begin(), deck.end(), harm);
            if (it != deck.end()) {
                deck.erase(it);
            } else {
                for (auto& p : s.zones.players) {
                    auto h = std::find(p.harm_hand.begin(), p.harm_hand.end(), harm);
                    if (h != p.harm_hand.end()) p.harm_hand.erase(h);
                }
            }
            s.phase = AwaitingDefense{Challenge{a, b, target, harm, harm.kind == 0 ? "story" : ""}};
            break;
        }
        case 3: {
            VoteContext v;
            v.proposer = a;
            v.voters = {b};
            if (rng.below(2) == 0) v.ballots[b] = rng.below(2) == 0;
            v.pending = Challenge{a, b, CardUid{Family::business, 1, 1}, CardUid{Family::harm, 0, 1}, "story"};
            s.phase = AwaitingVote{v};
            break;
        }
        default:
            s.phase = Terminal{Outcome{OutcomeKind::win, a, {{a}, {b}}}};
            break;
    }
    if (rng.below(10) == 0) s.eliminated.push_back(b);
    return s;
}

// ---------------------------------------------------------------------------
// Conservation: the multiset of card ids across every zone.

inline std::multiset<CardUid> all_cards(const GameState& s) {
    std::multiset<CardUid> out;
    auto add = [&](const auto& zone) { out.insert(zone.begin(), zone.end()); };
    add(s.zones.harm_deck);
    add(s.zones.feature_deck);
    add(s.zones.box);
    add(s.zones.business_discard);
    for (const auto& p : s.zones.players) {
        add(p.business_hand);
        add(p.harm_hand);
        add(p.feature_hand);
        add(p.in_play);
    }
    // Cards committed to a pending challenge or vote sit outside the zones.
    if (const auto* d = std::get_if<AwaitingDefense>(&s.phase)) out.insert(d->challenge.harm);
    if (const auto* v = std::get_if<AwaitingVote>(&s.phase)) {
        out.insert(v->vote.pending.harm);
        if (v->vote.defense_card) out.insert(*v->vote.defense_card);
    }
    return out;
}

/// Family of every zone matches its cards; returns a description of the
/// first mismatch or an empty string.
inline std::string zone_families_ok(const GameState& s) {
    auto check = [](const auto& zone, Family f, const char* name) -> std::string {
        for (const auto& c : zone) {
            if (c.family != f) return std::string(name) + " holds " + c.to_string();
        }
        return {};
    };
    std::string err;
    if (!(err = check(s.zones.harm_deck, Family::harm, "harm deck")).empty()) return err;
    if (!(err = check(s.zones.feature_deck, Family::feature, "feature deck")).empty()) return err;
    if (!(err = check(s.zones.box, Family::business, "box")).empty()) return err;
    if (!(err = check(s.zones.business_discard, Family::business, "discard")).empty()) return err;
    for (const auto& p : s.zones.players) {
        if (!(err = check(p.business_hand, Family::business, "business hand")).empty()) return err;
        if (!(err = check(p.in_play, Family::business, "in play")).empty()) return err;
        if (!(err = check(p.harm_hand, Family::harm, "harm hand")).empty()) return err;
        if (!(err = check(p.feature_hand, Family::feature, "feature hand")).empty()) return err;
    }
    return {};
}

// ---------------------------------------------------------------------------
// Redaction: card ids that must not appear in anything shown to `viewer`.

inline std::set<std::string> hidden_from(const GameState& s, PlayerId viewer) {
    std::set<std::string> out;
    for (PlayerId p = 0; p < s.player_count(); ++p) {
        if (p == viewer) continue;
        const auto& z = s.zones.players[p];
        for (const auto* zone : {&z.business_hand, &z.harm_hand, &z.feature_hand}) {
            for (const auto& c : *zone) out.insert(c.to_string());
        }
        if (std::holds_alternative<SetupRound>(s.phase)) {
            for (const auto& c : z.in_play) out.insert(c.to_string());
        }
    }
    return out;
}

/// Whether `text` contains `uid` as a whole token (so "H1#1" does not match
/// inside "H1#12").
inline bool mentions(const std::string& text, const std::string& uid) {
    for (auto pos = text.find(uid); pos != std::string::npos; pos = text.find(uid, pos + 1)) {
        const auto end = pos + uid.size();
        const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
        const bool right_ok = end == text.size() || !std::isdigit(static_cast<unsigned char>(text[end]));
        if (left_ok && right_ok) return true;
    }
    return false;
}

inline std::vector<std::string> leaks(const std::string& text, const std::set<std::string>& hidden) {
    std::vector<std::string> out;
    for (const auto& uid : hidden) {
        if (mentions(text, uid)) out.push_back(uid);
    }
    return out;
}

/// Deck order is leaked if a view lists the deck's cards rather than a count.
inline bool shows_deck_order(const nlohmann::json& view) {
    const std::string text = view.dump();
    return text.find("\"harm_deck\"") != std::string::npos || text.find("\"feature_deck\"") != std::string::npos;
}

}  // namespace oracle
