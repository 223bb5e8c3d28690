#include "aiaudit/bots.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace aiaudit {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

template <typename T>
std::vector<T> of_type(const std::vector<Action>& actions) {
    std::vector<T> out;
    for (const auto& a : actions) {
        if (const auto* t = std::get_if<T>(&a)) out.push_back(*t);
    }
    return out;
}

template <typename T>
bool has(const std::vector<Action>& actions) {
    return std::any_of(actions.begin(), actions.end(), [](const Action& a) { return std::holds_alternative<T>(a); });
}

std::set<HarmId> harm_union(const Catalog& catalog, const std::vector<CardUid>& businesses) {
    std::set<HarmId> out;
    for (const auto& b : businesses) {
        if (const auto* kind = catalog.find_business(b.kind)) out.insert(kind->vulnerable_harms.begin(), kind->vulnerable_harms.end());
    }
    return out;
}

int overlap(const std::vector<HarmId>& harms, const std::set<HarmId>& with) {
    return static_cast<int>(std::count_if(harms.begin(), harms.end(), [&](HarmId h) { return with.contains(h); }));
}

class Policy {
public:
    Policy(BotContext& ctx, const RedactedView& view)
        : ctx_(ctx), view_(view), catalog_(*ctx.catalog), me_(view.viewer.player) {}

    Action decide() {
        const auto& legal = view_.legal_actions;
        if (has<CastVote>(legal)) return vote();
        if (view_.phase == "awaiting_defense") return defend();
        return turn();
    }

private:
    bool is(StrategyName n) const { return ctx_.strategy.name == n; }

    const SeatSummary& seat(PlayerId p) const { return view_.seats[static_cast<std::size_t>(p)]; }

    // ----- setups

    int setup_score(const CardUid& business) const {
        const auto& harms = catalog_.business(business.kind).vulnerable_harms;
        switch (ctx_.strategy.name) {
            case StrategyName::backup_overlap:
                return overlap(harms, harm_union(catalog_, seat(me_).in_play));
            case StrategyName::mimic: {
                std::vector<CardUid> theirs;
                for (const auto& s : view_.seats) {
                    if (s.id != me_ && !s.eliminated) theirs.insert(theirs.end(), s.in_play.begin(), s.in_play.end());
                }
                return overlap(harms, harm_union(catalog_, theirs));
            }
            case StrategyName::greedy_defender: {
                int uncovered = 0;
                for (HarmId h : harms) {
                    const bool covered = std::any_of(view_.feature_hand.begin(), view_.feature_hand.end(),
                                                     [&](const CardUid& f) { return f.is_wild() || catalog_.counters(f.kind, h); });
                    if (!covered) ++uncovered;
                }
                return -uncovered;
            }
            default:
                return -static_cast<int>(harms.size());
        }
    }

    Action best_setup(const std::vector<SetupBusiness>& options) const {
        const SetupBusiness* best = nullptr;
        int best_score = 0;
        for (const auto& o : options) {
            const int score = setup_score(o.business);
            if (best == nullptr || score > best_score ||
                (score == best_score && o.business.kind < best->business.kind)) {
                best = &o;
                best_score = score;
            }
        }
        return *best;
    }

    // ----- turn

    // Opponent seat with the fewest running businesses first, then lowest business kind.
    std::pair<int, int> target_key(PlayerId owner, const CardUid& business) const {
        return {seat(owner).in_play_count, business.kind};
    }

    Action play_harm(const std::vector<PlayHarm>& options) const {
        if (is(StrategyName::greedy_defender)) {
            std::map<CardUid, std::set<CardUid>> by_target;
            for (const auto& o : options) by_target[o.target].insert(o.harm);
            const CardUid* target = nullptr;
            std::size_t most = 0;
            for (const auto& [t, harms] : by_target) {
                if (target == nullptr || harms.size() > most) {
                    target = &t;
                    most = harms.size();
                }
            }
            const PlayHarm* pick = nullptr;
            for (const auto& o : options) {
                if (o.target == *target && (pick == nullptr || o.harm < pick->harm)) pick = &o;
            }
            return *pick;
        }
        const PlayHarm* pick = nullptr;
        for (const auto& o : options) {
            if (pick == nullptr || target_key(o.defender, o.target) < target_key(pick->defender, pick->target) ||
                (o.target == pick->target && o.harm < pick->harm)) {
                pick = &o;
            }
        }
        return *pick;
    }

    Action play_wild(const std::vector<PlayWildHarm>& options) {
        const PlayWildHarm* pick = nullptr;
        for (const auto& o : options) {
            if (pick == nullptr || target_key(o.defender, o.target) < target_key(pick->defender, pick->target)) pick = &o;
        }
        PlayWildHarm out = *pick;
        out.narrative = narrative_template(ctx_.strategy, catalog_, {out.target.kind, 0, std::nullopt, {}});
        return out;
    }

    Action exchange(const std::vector<ExchangeHarm>& options) const {
        std::set<HarmId> exposed;
        for (const auto& s : view_.seats) {
            if (s.id == me_ || s.eliminated) continue;
            const auto u = harm_union(catalog_, s.in_play);
            exposed.insert(u.begin(), u.end());
        }
        const ExchangeHarm* pick = nullptr;
        auto useful = [&](const CardUid& h) { return h.is_wild() ? 1 : (exposed.contains(h.kind) ? 1 : 0); };
        for (const auto& o : options) {
            if (pick == nullptr || useful(o.harm) < useful(pick->harm) ||
                (useful(o.harm) == useful(pick->harm) && o.harm < pick->harm)) {
                pick = &o;
            }
        }
        return *pick;
    }

    Action turn() {
        const auto& legal = view_.legal_actions;
        const auto setups = of_type<SetupBusiness>(legal);
        if (setups.size() == legal.size()) return best_setup(setups);
        if (view_.setups_done >= 1 && has<EndTurn>(legal)) return EndTurn{};
        if (const auto harms = of_type<PlayHarm>(legal); !harms.empty()) return play_harm(harms);
        if (!setups.empty() && seat(me_).in_play_count < 2) return best_setup(setups);
        if (const auto wilds = of_type<PlayWildHarm>(legal); !wilds.empty()) return play_wild(wilds);
        if (const auto swaps = of_type<ExchangeHarm>(legal); !swaps.empty()) return exchange(swaps);
        if (!setups.empty()) return best_setup(setups);
        if (has<EndTurn>(legal)) return EndTurn{};
        return legal.front();
    }

    // ----- defense

    Action defend() {
        const auto& legal = view_.legal_actions;
        const auto& c = *view_.challenge;
        ctx_.memory.seen_harms[c.harm_kind] += 1;

        const auto regular = of_type<Defend>(legal);
        if (!regular.empty()) {
            const Defend* pick = nullptr;
            auto breadth = [&](const Defend& d) { return catalog_.feature(d.feature.kind).counters.size(); };
            for (const auto& d : regular) {
                if (pick == nullptr || breadth(d) < breadth(*pick) ||
                    (breadth(d) == breadth(*pick) && d.feature < pick->feature)) {
                    pick = &d;
                }
            }
            return *pick;
        }

        const bool spend = is(StrategyName::greedy_defender) || seat(me_).in_play_count <= 1;
        if (spend) {
            const auto narrated = of_type<DefendWithNarrative>(legal);
            if (!narrated.empty()) {
                // Prefer a feature that counters a harm the challenger named.
                const auto named = claimed_harms(catalog_, c.narrative);
                const DefendWithNarrative* pick = &narrated.front();
                for (const auto& d : narrated) {
                    const bool fits = std::any_of(named.begin(), named.end(),
                                                  [&](HarmId h) { return catalog_.counters(d.feature.kind, h); });
                    if (fits) {
                        pick = &d;
                        break;
                    }
                }
                DefendWithNarrative out = *pick;
                out.narrative = narrative_template(ctx_.strategy, catalog_,
                                                   {c.target.kind, c.harm_kind, out.feature.kind, c.narrative});
                return out;
            }
            const auto wild = of_type<DefendWild>(legal);
            if (!wild.empty()) {
                DefendWild out = wild.front();
                out.narrative = narrative_template(ctx_.strategy, catalog_, {c.target.kind, c.harm_kind, 0, c.narrative});
                return out;
            }
        }
        return Decline{};
    }

    // ----- votes

    Action vote() {
        if (is(StrategyName::random)) return CastVote{ctx_.rng.unit() < 0.5};
        const auto& c = *view_.challenge;
        const auto& business = catalog_.business(c.target.kind);
        const auto& vuln = business.vulnerable_harms;
        const auto& v = *view_.vote;

        std::vector<HarmId> harms;
        if (c.harm_kind != 0) {
            harms.push_back(c.harm_kind);
        } else {
            for (HarmId h : claimed_harms(catalog_, c.narrative)) {
                if (std::binary_search(vuln.begin(), vuln.end(), h)) harms.push_back(h);
            }
        }
        if (v.subject == VoteSubject::wild_harm_validity) {
            ctx_.memory.seen_harms[0] += 1;
            return CastVote{!harms.empty()};
        }
        if (harms.empty() && c.harm_kind == 0) harms = vuln;

        std::vector<FeatureId> features;
        if (v.feature_kind > 0) {
            features.push_back(v.feature_kind);
        } else {
            features = claimed_features(catalog_, v.defense_narrative);
        }
        for (FeatureId f : features) {
            for (HarmId h : harms) {
                if (catalog_.counters(f, h)) return CastVote{true};
            }
        }
        return CastVote{false};
    }

    BotContext& ctx_;
    const RedactedView& view_;
    const Catalog& catalog_;
    PlayerId me_;
};

Action fill_random_narrative(BotContext& ctx, const RedactedView& view, Action action) {
    const Catalog& catalog = *ctx.catalog;
    if (auto* a = std::get_if<PlayWildHarm>(&action)) {
        a->narrative = narrative_template(ctx.strategy, catalog, {a->target.kind, 0, std::nullopt, {}});
    } else if (auto* a = std::get_if<DefendWithNarrative>(&action)) {
        const auto& c = *view.challenge;
        a->narrative = narrative_template(ctx.strategy, catalog, {c.target.kind, c.harm_kind, a->feature.kind, c.narrative});
    } else if (auto* a = std::get_if<DefendWild>(&action)) {
        const auto& c = *view.challenge;
        a->narrative = narrative_template(ctx.strategy, catalog, {c.target.kind, c.harm_kind, 0, c.narrative});
    }
    return action;
}

}  // namespace

std::string_view strategy_name(StrategyName name) {
    switch (name) {
        case StrategyName::random: return "random";
        case StrategyName::least_harm_first: return "least_harm_first";
        case StrategyName::backup_overlap: return "backup_overlap";
        case StrategyName::mimic: return "mimic";
        case StrategyName::greedy_defender: return "greedy_defender";
    }
    return "unknown";
}

std::optional<StrategyName> strategy_from_name(std::string_view text) {
    for (auto n : {StrategyName::random, StrategyName::least_harm_first, StrategyName::backup_overlap,
                   StrategyName::mimic, StrategyName::greedy_defender}) {
        if (strategy_name(n) == text) return n;
    }
    return std::nullopt;
}

std::vector<Strategy> parse_lineup(std::string_view text) {
    std::vector<Strategy> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        const auto name = strategy_from_name(item);
        if (!name) throw std::invalid_argument("unknown bot strategy '" + std::string(item) + "'");
        out.push_back({*name, {}});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string lineup_to_string(const std::vector<Strategy>& lineup) {
    std::string out;
    for (const auto& s : lineup) {
        if (!out.empty()) out += ',';
        out += strategy_name(s.name);
    }
    return out;
}

std::vector<HarmId> claimed_harms(const Catalog& catalog, std::string_view text) {
    const auto haystack = lower(text);
    std::vector<HarmId> out;
    for (const auto& h : catalog.harms()) {
        if (haystack.find(lower(h.title)) != std::string::npos) out.push_back(h.id);
    }
    return out;
}

std::vector<FeatureId> claimed_features(const Catalog& catalog, std::string_view text) {
    const auto haystack = lower(text);
    std::vector<FeatureId> out;
    for (const auto& f : catalog.features()) {
        if (haystack.find(lower(f.title)) != std::string::npos) out.push_back(f.id);
    }
    return out;
}

std::string narrative_template(const Strategy&, const Catalog& catalog, const NarrativeContext& ctx) {
    const auto& business = catalog.business(ctx.business);
    std::ostringstream out;

    if (!ctx.feature_kind) {
        const HarmId claimed = business.vulnerable_harms.empty() ? 0 : business.vulnerable_harms.front();
        out << "\"" << business.title << "\" could end up " << "causing \"";
        out << (claimed ? catalog.harm(claimed).title : std::string("harm to the people it serves"));
        out << "\" for the people who use it.";
        return out.str();
    }

    std::vector<HarmId> harms;
    if (ctx.harm_kind != 0) {
        harms.push_back(ctx.harm_kind);
    } else {
        for (HarmId h : claimed_harms(catalog, ctx.challenge_narrative)) harms.push_back(h);
        if (harms.empty()) harms = business.vulnerable_harms;
    }

    FeatureId feature = *ctx.feature_kind;
    HarmId harm = harms.empty() ? 0 : harms.front();
    if (feature == 0) {
        // Imagine the feature: name a catalog feature that counters the harm.
        for (HarmId h : harms) {
            for (const auto& f : catalog.features()) {
                if (catalog.counters(f.id, h)) {
                    feature = f.id;
                    harm = h;
                    break;
                }
            }
            if (feature != 0) break;
        }
    } else {
        for (HarmId h : harms) {
            if (catalog.counters(feature, h)) {
                harm = h;
                break;
            }
        }
    }

    out << "\"" << business.title << "\" avoids \"";
    out << (harm ? catalog.harm(harm).title : std::string("the harm described"));
    out << "\" by ";
    if (feature != 0) {
        out << "\"" << catalog.feature(feature).title << "\".";
    } else {
        out << "letting people see and question how it works.";
    }
    return out.str();
}

Action choose_action(BotContext& context, const RedactedView& view) {
    if (view.legal_actions.empty()) {
        throw NoLegalAction("bot asked to act with no legal action in phase " + view.phase);
    }
    if (context.strategy.name == StrategyName::random) {
        const bool voting = std::holds_alternative<CastVote>(view.legal_actions.front());
        if (voting) return CastVote{context.rng.unit() < 0.5};
        if (view.challenge && view.phase == "awaiting_defense") context.memory.seen_harms[view.challenge->harm_kind] += 1;
        const auto pick = context.rng.below(view.legal_actions.size());
        return fill_random_narrative(context, view, view.legal_actions[pick]);
    }
    return Policy(context, view).decide();
}

}  // namespace aiaudit
