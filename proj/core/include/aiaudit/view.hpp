#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiaudit/game.hpp"

namespace aiaudit {

enum class ViewerRole { player, spectator, educator };

struct Viewer {
    ViewerRole role = ViewerRole::player;
    PlayerId player = -1;

    static Viewer seat(PlayerId p) { return {ViewerRole::player, p}; }
    static Viewer spectator() { return {ViewerRole::spectator, -1}; }
    static Viewer educator() { return {ViewerRole::educator, -1}; }
};

struct SeatSummary {
    PlayerId id = 0;
    bool eliminated = false;
    int business_hand = 0;
    int harm_hand = 0;
    int feature_hand = 0;
    int in_play_count = 0;
    // Empty while the opening setup round keeps other players' choices hidden.
    std::vector<CardUid> in_play;
};

struct ChallengeView {
    PlayerId challenger = 0;
    PlayerId defender = 0;
    CardUid target;
    int harm_kind = 0;  // 0 = wild
    std::string narrative;
};

struct VoteView {
    VoteSubject subject = VoteSubject::wild_harm_validity;
    PlayerId proposer = 0;
    std::vector<PlayerId> voters;
    int ballots_cast = 0;
    int approvals = 0;
    int feature_kind = -1;  // defense card kind for feature votes; 0 = wild
    std::string defense_narrative;
};

/// Everything one viewer is entitled to see. Other players' hands appear as
/// counts, decks as sizes; harm and feature cards outside the viewer's own
/// hand are named by kind only.
struct RedactedView {
    Viewer viewer;
    GameConfig rules;  // seed withheld
    std::string phase;
    PlayerId active = -1;
    int setups_done = 0;
    std::optional<ChallengeView> challenge;
    std::optional<VoteView> vote;
    std::optional<Outcome> outcome;

    std::vector<CardUid> business_hand;
    std::vector<CardUid> harm_hand;
    std::vector<CardUid> feature_hand;

    std::vector<SeatSummary> seats;
    std::vector<CardUid> business_discard;
    int harm_deck_size = 0;
    int feature_deck_size = 0;
    int box_size = 0;
    int turn_counter = 0;

    std::vector<Action> legal_actions;
    std::vector<Event> log;
    std::optional<std::string> guide_excerpt;  // non-player viewers only
};

struct ViewOptions {
    bool include_log = true;
};

/// Throws EngineError(unknown_viewer) for seats outside the game.
RedactedView view_for(const GameState& state, const Viewer& viewer, const ViewOptions& options = {});

/// Whether `event` may be shown to `viewer`.
bool visible_to(const Event& event, const Viewer& viewer);

nlohmann::json view_to_json(const RedactedView& view);

}  // namespace aiaudit
