#include <iostream>
#include <string>

#include "aiaudit/engine.hpp"
#include "aiaudit/rng.hpp"
#include "aiaudit/view.hpp"
#include "cli.hpp"

namespace aiaudit::cli {

namespace {

constexpr PlayerId kHuman = 0;

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<std::string> read_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    return trim(line);
}

std::optional<Action> prompt(const Catalog& catalog, const RedactedView& view, std::istream& in, std::ostream& out) {
    out << describe_view(catalog, view);
    const auto& legal = view.legal_actions;
    for (std::size_t i = 0; i < legal.size(); ++i) {
        out << "  " << (i + 1) << ") " << describe_action(catalog, legal[i]) << "\n";
    }
    while (true) {
        out << "choose 1-" << legal.size() << ": " << std::flush;
        const auto line = read_line(in);
        if (!line) return std::nullopt;
        std::size_t pick = 0;
        try {
            std::size_t used = 0;
            pick = std::stoul(*line, &used);
            if (used != line->size()) pick = 0;
        } catch (const std::exception&) {
            pick = 0;
        }
        if (pick < 1 || pick > legal.size()) {
            out << "'" << *line << "' is not one of the listed moves\n";
            continue;
        }
        Action action = legal[pick - 1];
        if (requires_narrative(action)) {
            std::string text;
            while (text.empty()) {
                out << "narrative: " << std::flush;
                const auto narrative = read_line(in);
                if (!narrative) return std::nullopt;
                text = *narrative;
                if (text.empty()) out << "a narrative is required for this move\n";
            }
            std::visit(
                [&](auto& a) {
                    if constexpr (requires { a.narrative; }) a.narrative = text;
                },
                action);
        }
        return action;
    }
}

void report_events(const Catalog& catalog, const std::vector<Event>& events, std::ostream& out) {
    for (const auto& e : events) {
        if (!visible_to(e, Viewer::seat(kHuman))) continue;
        const std::string who = e.actor >= 0 ? "P" + std::to_string(e.actor + 1) : "";
        switch (e.type) {
            case EventType::challenge:
                out << "* " << who << " challenges P" << (e.other + 1) << "'s " << card_label(catalog, *e.business)
                    << " with " << harm_label(catalog, e.harm_kind) << "\n";
                if (!e.text.empty()) out << "    \"" << e.text << "\"\n";
                if (e.harm_kind > 0) {
                    if (auto excerpt = guide_excerpt(catalog, e.business->kind, e.harm_kind)) {
                        out << "    guide: " << *excerpt << "\n";
                    }
                }
                break;
            case EventType::vote_opened:
                out << "* " << who << " asks for a vote";
                if (!e.text.empty()) out << ": \"" << e.text << "\"";
                out << "\n";
                break;
            case EventType::vote_resolved:
                out << "* vote " << (*e.approved ? "approved" : "rejected") << " (" << e.text << ")\n";
                break;
            case EventType::defense_succeeded:
                out << "* " << who << " defends " << card_label(catalog, *e.business) << "\n";
                break;
            case EventType::defense_failed:
                out << "* " << who << " loses " << card_label(catalog, *e.business) << "\n";
                break;
            case EventType::business_revealed:
                out << "* " << who << " runs " << card_label(catalog, *e.business) << "\n";
                break;
            case EventType::business_set_up:
                if (e.business) out << "* " << who << " sets up " << card_label(catalog, *e.business) << "\n";
                break;
            case EventType::harm_exchanged:
                if (e.is_public()) out << "* " << who << " exchanges a harm card\n";
                break;
            case EventType::player_eliminated:
                out << "* " << who << " is out of businesses\n";
                break;
            default:
                break;
        }
    }
}

}  // namespace

PlayResult play(const PlaySetup& setup, std::istream& in, std::ostream& out) {
    const auto& catalog = *setup.catalog;
    RecordedGame game(setup.config, setup.catalog);
    std::vector<std::optional<BotContext>> bots(static_cast<std::size_t>(setup.config.player_count));
    for (std::size_t i = 0; i < setup.bots.size(); ++i) {
        bots[i + 1].emplace(setup.bots[i], split_seed(setup.config.seed, 2 + i), setup.catalog);
    }
    out << "You are P1 against";
    for (std::size_t i = 0; i < setup.bots.size(); ++i) {
        out << " P" << (i + 2) << "=" << strategy_name(setup.bots[i].name);
    }
    out << ". Seed " << setup.config.seed << ".\n";

    PlayResult result;
    while (!is_terminal(game.state())) {
        const auto awaiting = awaiting_players(game.state());
        const PlayerId actor = awaiting.front();
        const auto view = view_for(game.state(), Viewer::seat(actor), ViewOptions{.include_log = false});
        Action action;
        if (actor == kHuman) {
            auto chosen = prompt(catalog, view, in, out);
            if (!chosen) {
                out << "\ninput closed; game abandoned\n";
                result.log = game.log();
                return result;
            }
            action = std::move(*chosen);
        } else {
            action = choose_action(*bots[static_cast<std::size_t>(actor)], view);
        }
        try {
            report_events(catalog, game.apply(actor, action), out);
        } catch (const EngineError& e) {
            out << "rejected: " << e.what() << "\n";
        }
    }
    const auto outcome = *is_terminal(game.state());
    if (outcome.kind == OutcomeKind::win) {
        out << "Game over after " << game.state().turn_counter << " turns: P" << (*outcome.winner + 1) << " wins.\n";
    } else {
        out << "Game over: stalemate at the turn cap.\n";
    }
    out << "Ranking:";
    for (const auto& group : outcome.ranking) {
        out << " [";
        for (std::size_t i = 0; i < group.size(); ++i) out << (i ? " " : "") << "P" << (group[i] + 1);
        out << "]";
    }
    out << "\n";
    result.finished = true;
    result.log = game.log();
    return result;
}

}  // namespace aiaudit::cli
