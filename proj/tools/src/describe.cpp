#include <sstream>

#include "aiaudit/view.hpp"
#include "cli.hpp"

namespace aiaudit::cli {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string player(PlayerId p) { return "P" + std::to_string(p + 1); }

}  // namespace

std::string card_label(const Catalog& catalog, const CardUid& card) {
    std::string title;
    switch (card.family) {
        case Family::business: title = catalog.business(card.kind).title; break;
        case Family::harm: title = card.is_wild() ? "Wild Harm" : catalog.harm(card.kind).title; break;
        case Family::feature: title = card.is_wild() ? "Wild Feature" : catalog.feature(card.kind).title; break;
    }
    return card.to_string() + " \"" + title + "\"";
}

std::string harm_label(const Catalog& catalog, int kind) {
    if (kind == 0) return "Wild Harm";
    const auto& h = catalog.harm(kind);
    return "harm " + std::to_string(kind) + " \"" + h.title + "\" [" + h.color + " " + h.shape + "]";
}

std::string describe_action(const Catalog& catalog, const Action& action) {
    return std::visit(
        overloaded{
            [&](const SetupBusiness& a) { return "Set up " + card_label(catalog, a.business); },
            [](const EndTurn&) { return std::string("End turn"); },
            [&](const PlayHarm& a) {
                return "Play " + card_label(catalog, a.harm) + " against " + player(a.defender) + "'s " +
                       card_label(catalog, a.target);
            },
            [&](const PlayWildHarm& a) {
                return "Play wild harm " + a.harm.to_string() + " against " + player(a.defender) + "'s " +
                       card_label(catalog, a.target) + " (needs a narrative and a vote)";
            },
            [&](const Defend& a) { return "Defend with " + card_label(catalog, a.feature); },
            [&](const DefendWithNarrative& a) {
                return "Defend with " + card_label(catalog, a.feature) + " and a narrative (vote)";
            },
            [&](const DefendWild& a) {
                return "Defend with wild feature " + a.feature.to_string() + " and a narrative (vote)";
            },
            [](const Decline&) { return std::string("Decline to defend (lose the business)"); },
            [](const CastVote& a) { return std::string(a.approve ? "Vote approve" : "Vote reject"); },
            [&](const ExchangeHarm& a) { return "Exchange " + card_label(catalog, a.harm) + " for a new harm"; },
            [](const Pass&) { return std::string("Pass"); },
        },
        action);
}

std::string describe_view(const Catalog& catalog, const RedactedView& v) {
    std::ostringstream out;
    out << "-- turn " << v.turn_counter << ", " << v.phase;
    if (v.active >= 0) out << ", " << player(v.active) << " to act";
    out << " -- harm deck " << v.harm_deck_size << ", feature deck " << v.feature_deck_size << "\n";
    for (const auto& seat : v.seats) {
        out << "  " << player(seat.id) << (seat.id == v.viewer.player ? " (you)" : "")
            << (seat.eliminated ? " eliminated" : "") << ": hand " << seat.business_hand << "B/" << seat.harm_hand
            << "H/" << seat.feature_hand << "F; running:";
        if (seat.in_play.empty()) out << (seat.in_play_count > 0 ? " (hidden)" : " none");
        for (const auto& b : seat.in_play) {
            out << "\n      " << card_label(catalog, b) << " harms";
            for (int h : catalog.business(b.kind).vulnerable_harms) out << ' ' << h;
        }
        out << "\n";
    }
    auto list = [&](const char* label, const std::vector<CardUid>& cards) {
        out << "  your " << label << ":";
        if (cards.empty()) out << " none";
        for (const auto& c : cards) {
            out << "\n      " << card_label(catalog, c);
            if (c.family == Family::harm && !c.is_wild()) {
                const auto& h = catalog.harm(c.kind);
                out << " [" << h.color << " " << h.shape << "]";
            }
            if (c.family == Family::feature && !c.is_wild()) {
                out << " counters";
                for (int h : catalog.feature(c.kind).counters) out << ' ' << h;
            }
        }
        out << "\n";
    };
    list("businesses", v.business_hand);
    list("harms", v.harm_hand);
    list("features", v.feature_hand);
    if (v.challenge) {
        out << "  challenge: " << player(v.challenge->challenger) << " plays " << harm_label(catalog, v.challenge->harm_kind)
            << " against " << player(v.challenge->defender) << "'s " << card_label(catalog, v.challenge->target) << "\n";
        if (!v.challenge->narrative.empty()) out << "    narrative: " << v.challenge->narrative << "\n";
    }
    if (v.vote) {
        out << "  vote by " << v.vote->voters.size() << " players, " << v.vote->ballots_cast << " cast";
        if (!v.vote->defense_narrative.empty()) out << "\n    defense narrative: " << v.vote->defense_narrative;
        out << "\n";
    }
    return out.str();
}

}  // namespace aiaudit::cli
