#pragma once

// Value types shared by the rules engine, views, bots and the server.

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aiaudit/catalog.hpp"
#include "aiaudit/rng.hpp"

namespace aiaudit {

using PlayerId = int;

enum class Family : std::uint8_t { business, harm, feature };

/// Identity of one physical card. Kind 0 is the wild card of the harm and
/// feature families. Text form: "B4#1", "H5#2", "F0#1".
struct CardUid {
    Family family = Family::business;
    int kind = 0;
    int copy = 1;

    bool is_wild() const noexcept { return kind == 0 && family != Family::business; }
    std::string to_string() const;
    static CardUid parse(std::string_view text);

    auto operator<=>(const CardUid&) const = default;
};

struct GameConfig {
    int player_count = 4;
    int initial_harm_hand = 2;
    int initial_feature_hand = 3;
    int wild_harm_copies = 1;
    int wild_feature_copies = 2;
    int harm_copies_per_kind = 3;
    int feature_copies_per_kind = 2;
    int max_setups_per_turn = 3;
    bool harm_exchange_enabled = true;
    bool decline_defense_allowed = true;
    bool literal_replacement_draw = false;
    int turn_cap = 500;
    std::uint64_t seed = 0;

    bool operator==(const GameConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Actions

struct SetupBusiness {
    CardUid business;
    bool operator==(const SetupBusiness&) const = default;
};
struct EndTurn {
    bool operator==(const EndTurn&) const = default;
};
struct PlayHarm {
    CardUid harm;
    PlayerId defender = 0;
    CardUid target;
    bool operator==(const PlayHarm&) const = default;
};
struct PlayWildHarm {
    CardUid harm;
    PlayerId defender = 0;
    CardUid target;
    std::string narrative;
    bool operator==(const PlayWildHarm&) const = default;
};
struct Defend {
    CardUid feature;
    bool operator==(const Defend&) const = default;
};
struct DefendWithNarrative {
    CardUid feature;
    std::string narrative;
    bool operator==(const DefendWithNarrative&) const = default;
};
struct DefendWild {
    CardUid feature;
    std::string narrative;
    bool operator==(const DefendWild&) const = default;
};
struct Decline {
    bool operator==(const Decline&) const = default;
};
struct CastVote {
    bool approve = false;
    bool operator==(const CastVote&) const = default;
};
struct ExchangeHarm {
    CardUid harm;
    bool operator==(const ExchangeHarm&) const = default;
};
struct Pass {
    bool operator==(const Pass&) const = default;
};

using Action = std::variant<SetupBusiness, EndTurn, PlayHarm, PlayWildHarm, Defend,
                            DefendWithNarrative, DefendWild, Decline, CastVote, ExchangeHarm, Pass>;

/// Equality that ignores narrative text. legal_actions lists narrated moves
/// with empty narratives; submitted ones carry the player's text.
bool same_move(const Action& a, const Action& b);

/// True for actions that must carry a non-empty narrative.
bool requires_narrative(const Action& action);

std::string_view action_name(const Action& action);

// ---------------------------------------------------------------------------
// Phases

struct Challenge {
    PlayerId challenger = 0;
    PlayerId defender = 0;
    CardUid target;
    CardUid harm;
    std::string narrative;

    bool operator==(const Challenge&) const = default;
};

enum class VoteSubject { wild_harm_validity, wild_feature_adequacy, narrated_feature_vs_wild_harm };

struct VoteContext {
    VoteSubject subject = VoteSubject::wild_harm_validity;
    PlayerId proposer = 0;
    std::vector<PlayerId> voters;
    std::map<PlayerId, bool> ballots;
    Challenge pending;
    std::optional<CardUid> defense_card;
    std::string defense_narrative;

    bool operator==(const VoteContext&) const = default;
};

enum class OutcomeKind { win, stalemate };

struct Outcome {
    OutcomeKind kind = OutcomeKind::win;
    std::optional<PlayerId> winner;
    std::vector<std::vector<PlayerId>> ranking;  // best first; inner vectors are ties

    bool operator==(const Outcome&) const = default;
};

/// Opening round: each player in turn order sets up one business, hidden from
/// the others until the round completes.
struct SetupRound {
    PlayerId current = 0;
    bool operator==(const SetupRound&) const = default;
};
struct AwaitingTurnAction {
    PlayerId active = 0;
    int setups_done = 0;
    bool operator==(const AwaitingTurnAction&) const = default;
};
struct AwaitingDefense {
    Challenge challenge;
    bool operator==(const AwaitingDefense&) const = default;
};
struct AwaitingVote {
    VoteContext vote;
    bool operator==(const AwaitingVote&) const = default;
};
struct Terminal {
    Outcome outcome;
    bool operator==(const Terminal&) const = default;
};

using Phase = std::variant<SetupRound, AwaitingTurnAction, AwaitingDefense, AwaitingVote, Terminal>;

std::string_view phase_name(const Phase& phase);

// ---------------------------------------------------------------------------
// Events

enum class EventType {
    game_started,
    card_drawn,
    business_set_up,
    business_revealed,
    challenge,
    vote_opened,
    ballot_cast,
    vote_resolved,
    defense_succeeded,
    defense_failed,
    wild_spent,
    harm_exchanged,
    turn_ended,
    player_eliminated,
    game_over,
};

std::string_view event_type_name(EventType type);

/// Harm and feature card uids appear only in private events (audience set);
/// public events name those cards by kind.
struct Event {
    EventType type = EventType::game_started;
    std::optional<PlayerId> audience;
    PlayerId actor = -1;
    PlayerId other = -1;
    std::optional<CardUid> business;
    std::optional<CardUid> card;
    int harm_kind = -1;  // -1 none, 0 wild
    int feature_kind = -1;
    std::optional<bool> approved;
    int count = 0;
    std::string text;
    int turn = 0;

    bool is_public() const noexcept { return !audience.has_value(); }
    bool operator==(const Event&) const = default;
};

// ---------------------------------------------------------------------------
// State

struct PlayerZones {
    std::vector<CardUid> business_hand;
    std::vector<CardUid> harm_hand;
    std::vector<CardUid> feature_hand;
    std::vector<CardUid> in_play;

    bool operator==(const PlayerZones&) const = default;
};

struct Zones {
    std::deque<CardUid> harm_deck;  // front is the top
    std::deque<CardUid> feature_deck;
    std::vector<CardUid> box;
    std::vector<CardUid> business_discard;
    std::vector<PlayerZones> players;

    bool operator==(const Zones&) const = default;
};

struct GameState {
    GameConfig config;
    std::shared_ptr<const Catalog> catalog;
    std::uint64_t catalog_fingerprint = 0;
    Zones zones;
    std::vector<PlayerId> turn_order;
    std::vector<PlayerId> eliminated;  // in elimination order
    Phase phase;
    int turn_counter = 0;
    Rng rng;
    std::vector<Event> event_log;

    bool is_eliminated(PlayerId player) const noexcept;
    int player_count() const noexcept { return static_cast<int>(zones.players.size()); }
};

enum class EngineErrc {
    invalid_config,
    catalog_errors,
    illegal_action,
    wrong_phase,
    not_your_turn,
    unknown_player,
    unknown_viewer,
};

std::string_view engine_errc_name(EngineErrc code);

class EngineError : public std::runtime_error {
public:
    EngineError(EngineErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    EngineErrc code() const noexcept { return code_; }

private:
    EngineErrc code_;
};

std::shared_ptr<const Catalog> default_catalog_ptr();

}  // namespace aiaudit
