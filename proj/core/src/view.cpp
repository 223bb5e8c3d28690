#include "aiaudit/view.hpp"

#include <algorithm>

#include "aiaudit/engine.hpp"
#include "aiaudit/serialize.hpp"

namespace aiaudit {

using nlohmann::json;

namespace {

json uids(const std::vector<CardUid>& cards) {
    json out = json::array();
    for (const auto& c : cards) out.push_back(c.to_string());
    return out;
}

std::string_view role_name(ViewerRole role) {
    switch (role) {
        case ViewerRole::player: return "player";
        case ViewerRole::spectator: return "spectator";
        case ViewerRole::educator: return "educator";
    }
    return "unknown";
}

std::string_view subject_name(VoteSubject s) {
    switch (s) {
        case VoteSubject::wild_harm_validity: return "wild_harm_validity";
        case VoteSubject::wild_feature_adequacy: return "wild_feature_adequacy";
        case VoteSubject::narrated_feature_vs_wild_harm: return "narrated_feature_vs_wild_harm";
    }
    return "unknown";
}

ChallengeView redact(const Challenge& c) {
    return {c.challenger, c.defender, c.target, c.harm.kind, c.narrative};
}

}  // namespace

bool visible_to(const Event& event, const Viewer& viewer) {
    if (event.is_public()) return true;
    return viewer.role == ViewerRole::player && *event.audience == viewer.player;
}

RedactedView view_for(const GameState& s, const Viewer& viewer, const ViewOptions& options) {
    if (viewer.role == ViewerRole::player && (viewer.player < 0 || viewer.player >= s.player_count())) {
        throw EngineError(EngineErrc::unknown_viewer, "unknown viewer seat " + std::to_string(viewer.player));
    }
    RedactedView v;
    v.viewer = viewer;
    v.rules = s.config;
    v.rules.seed = 0;
    v.phase = std::string(phase_name(s.phase));
    v.turn_counter = s.turn_counter;
    v.harm_deck_size = static_cast<int>(s.zones.harm_deck.size());
    v.feature_deck_size = static_cast<int>(s.zones.feature_deck.size());
    v.box_size = static_cast<int>(s.zones.box.size());
    v.business_discard = s.zones.business_discard;

    const bool hidden_setup = std::holds_alternative<SetupRound>(s.phase);
    for (PlayerId p = 0; p < s.player_count(); ++p) {
        const auto& z = s.zones.players[static_cast<std::size_t>(p)];
        SeatSummary seat;
        seat.id = p;
        seat.eliminated = s.is_eliminated(p);
        seat.business_hand = static_cast<int>(z.business_hand.size());
        seat.harm_hand = static_cast<int>(z.harm_hand.size());
        seat.feature_hand = static_cast<int>(z.feature_hand.size());
        seat.in_play_count = static_cast<int>(z.in_play.size());
        const bool own = viewer.role == ViewerRole::player && viewer.player == p;
        if (!hidden_setup || own) seat.in_play = z.in_play;
        v.seats.push_back(std::move(seat));
    }

    if (viewer.role == ViewerRole::player) {
        const auto& z = s.zones.players[static_cast<std::size_t>(viewer.player)];
        v.business_hand = z.business_hand;
        v.harm_hand = z.harm_hand;
        v.feature_hand = z.feature_hand;
        v.legal_actions = legal_actions(s, viewer.player);
    }

    std::optional<std::pair<int, int>> pairing;
    if (const auto* p = std::get_if<SetupRound>(&s.phase)) {
        v.active = p->current;
    } else if (const auto* p = std::get_if<AwaitingTurnAction>(&s.phase)) {
        v.active = p->active;
        v.setups_done = p->setups_done;
    } else if (const auto* p = std::get_if<AwaitingDefense>(&s.phase)) {
        v.active = p->challenge.defender;
        v.challenge = redact(p->challenge);
        pairing = {p->challenge.target.kind, p->challenge.harm.kind};
    } else if (const auto* p = std::get_if<AwaitingVote>(&s.phase)) {
        const auto& vote = p->vote;
        v.active = vote.proposer;
        v.challenge = redact(vote.pending);
        VoteView vv;
        vv.subject = vote.subject;
        vv.proposer = vote.proposer;
        vv.voters = vote.voters;
        vv.ballots_cast = static_cast<int>(vote.ballots.size());
        vv.approvals = static_cast<int>(
            std::count_if(vote.ballots.begin(), vote.ballots.end(), [](const auto& kv) { return kv.second; }));
        vv.feature_kind = vote.defense_card ? vote.defense_card->kind : -1;
        vv.defense_narrative = vote.defense_narrative;
        v.vote = std::move(vv);
        pairing = {vote.pending.target.kind, vote.pending.harm.kind};
    } else if (const auto* p = std::get_if<Terminal>(&s.phase)) {
        v.outcome = p->outcome;
    }

    if (viewer.role != ViewerRole::player && pairing && pairing->second != 0) {
        const auto* business = s.catalog->find_business(pairing->first);
        if (business != nullptr && s.catalog->find_harm(pairing->second) != nullptr) {
            v.guide_excerpt = guide_excerpt(*s.catalog, pairing->first, pairing->second);
        }
    }

    if (options.include_log) {
        for (const auto& e : s.event_log) {
            if (!visible_to(e, viewer)) continue;
            v.log.push_back(e);
            // Past draws keep their kind but not the uid: the card may since
            // have cycled through a deck into someone else's hand.
            v.log.back().card.reset();
        }
    }
    return v;
}

json view_to_json(const RedactedView& v) {
    json seats = json::array();
    for (const auto& seat : v.seats) {
        seats.push_back({{"id", seat.id},
                         {"eliminated", seat.eliminated},
                         {"business_hand", seat.business_hand},
                         {"harm_hand", seat.harm_hand},
                         {"feature_hand", seat.feature_hand},
                         {"in_play_count", seat.in_play_count},
                         {"in_play", uids(seat.in_play)}});
    }
    auto rules = config_to_json(v.rules);
    rules.erase("seed");
    json out{{"viewer", {{"role", role_name(v.viewer.role)}, {"seat", v.viewer.player}}},
             {"rules", rules},
             {"phase", v.phase},
             {"active", v.active},
             {"setups_done", v.setups_done},
             {"hand",
              {{"business", uids(v.business_hand)}, {"harm", uids(v.harm_hand)}, {"feature", uids(v.feature_hand)}}},
             {"seats", seats},
             {"business_discard", uids(v.business_discard)},
             {"harm_deck_size", v.harm_deck_size},
             {"feature_deck_size", v.feature_deck_size},
             {"box_size", v.box_size},
             {"turn_counter", v.turn_counter}};
    if (v.challenge) {
        out["challenge"] = {{"challenger", v.challenge->challenger},
                            {"defender", v.challenge->defender},
                            {"target", v.challenge->target.to_string()},
                            {"harm_kind", v.challenge->harm_kind},
                            {"narrative", v.challenge->narrative}};
    }
    if (v.vote) {
        out["vote"] = {{"subject", subject_name(v.vote->subject)},
                       {"proposer", v.vote->proposer},
                       {"voters", v.vote->voters},
                       {"ballots_cast", v.vote->ballots_cast},
                       {"approvals", v.vote->approvals},
                       {"feature_kind", v.vote->feature_kind},
                       {"defense_narrative", v.vote->defense_narrative}};
    }
    if (v.outcome) out["outcome"] = outcome_to_json(*v.outcome);
    json legal = json::array();
    for (const auto& a : v.legal_actions) legal.push_back(action_to_json(a));
    out["legal_actions"] = legal;
    json log = json::array();
    for (const auto& e : v.log) log.push_back(event_to_json(e));
    out["log"] = log;
    if (v.guide_excerpt) out["guide_excerpt"] = *v.guide_excerpt;
    return out;
}

}  // namespace aiaudit
