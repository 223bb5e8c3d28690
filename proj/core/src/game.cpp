#include "aiaudit/game.hpp"

#include <algorithm>
#include <charconv>

namespace aiaudit {

std::string CardUid::to_string() const {
    char prefix = 'B';
    if (family == Family::harm) prefix = 'H';
    if (family == Family::feature) prefix = 'F';
    return std::string(1, prefix) + std::to_string(kind) + "#" + std::to_string(copy);
}

CardUid CardUid::parse(std::string_view text) {
    auto fail = [&]() -> CardUid {
        throw std::invalid_argument("malformed card id '" + std::string(text) + "'");
    };
    if (text.size() < 4) return fail();
    CardUid uid;
    switch (text[0]) {
        case 'B': uid.family = Family::business; break;
        case 'H': uid.family = Family::harm; break;
        case 'F': uid.family = Family::feature; break;
        default: return fail();
    }
    const auto hash = text.find('#');
    if (hash == std::string_view::npos || hash < 2) return fail();
    const auto kind_text = text.substr(1, hash - 1);
    const auto copy_text = text.substr(hash + 1);
    auto [p1, e1] = std::from_chars(kind_text.data(), kind_text.data() + kind_text.size(), uid.kind);
    auto [p2, e2] = std::from_chars(copy_text.data(), copy_text.data() + copy_text.size(), uid.copy);
    if (e1 != std::errc() || e2 != std::errc() || p1 != kind_text.data() + kind_text.size() ||
        p2 != copy_text.data() + copy_text.size() || uid.kind < 0 || uid.copy < 1 ||
        (uid.family == Family::business && uid.kind == 0)) {
        return fail();
    }
    return uid;
}

namespace {

template <typename T>
T strip(T action) {
    if constexpr (requires { action.narrative; }) action.narrative.clear();
    return action;
}

}  // namespace

bool same_move(const Action& a, const Action& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& lhs) {
            using T = std::decay_t<decltype(lhs)>;
            return strip(lhs) == strip(std::get<T>(b));
        },
        a);
}

bool requires_narrative(const Action& action) {
    return std::holds_alternative<PlayWildHarm>(action) ||
           std::holds_alternative<DefendWithNarrative>(action) ||
           std::holds_alternative<DefendWild>(action);
}

std::string_view action_name(const Action& action) {
    static constexpr std::string_view names[] = {
        "setup_business", "end_turn", "play_harm", "play_wild_harm", "defend", "defend_with_narrative",
        "defend_wild", "decline", "cast_vote", "exchange_harm", "pass",
    };
    return names[action.index()];
}

std::string_view phase_name(const Phase& phase) {
    static constexpr std::string_view names[] = {
        "setup_round", "awaiting_turn_action", "awaiting_defense", "awaiting_vote", "terminal",
    };
    return names[phase.index()];
}

std::string_view event_type_name(EventType type) {
    switch (type) {
        case EventType::game_started: return "game_started";
        case EventType::card_drawn: return "card_drawn";
        case EventType::business_set_up: return "business_set_up";
        case EventType::business_revealed: return "business_revealed";
        case EventType::challenge: return "challenge";
        case EventType::vote_opened: return "vote_opened";
        case EventType::ballot_cast: return "ballot_cast";
        case EventType::vote_resolved: return "vote_resolved";
        case EventType::defense_succeeded: return "defense_succeeded";
        case EventType::defense_failed: return "defense_failed";
        case EventType::wild_spent: return "wild_spent";
        case EventType::harm_exchanged: return "harm_exchanged";
        case EventType::turn_ended: return "turn_ended";
        case EventType::player_eliminated: return "player_eliminated";
        case EventType::game_over: return "game_over";
    }
    return "unknown";
}

std::string_view engine_errc_name(EngineErrc code) {
    switch (code) {
        case EngineErrc::invalid_config: return "invalid-config";
        case EngineErrc::catalog_errors: return "catalog-errors";
        case EngineErrc::illegal_action: return "illegal-action";
        case EngineErrc::wrong_phase: return "wrong-phase";
        case EngineErrc::not_your_turn: return "not-your-turn";
        case EngineErrc::unknown_player: return "unknown-player";
        case EngineErrc::unknown_viewer: return "unknown-viewer";
    }
    return "unknown";
}

bool GameState::is_eliminated(PlayerId player) const noexcept {
    return std::find(eliminated.begin(), eliminated.end(), player) != eliminated.end();
}

std::shared_ptr<const Catalog> default_catalog_ptr() {
    static const std::shared_ptr<const Catalog> ptr(&default_catalog(), [](const Catalog*) {});
    return ptr;
}

}  // namespace aiaudit
