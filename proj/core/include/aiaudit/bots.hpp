#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aiaudit/rng.hpp"
#include "aiaudit/view.hpp"

namespace aiaudit {

enum class StrategyName { random, least_harm_first, backup_overlap, mimic, greedy_defender };

struct Strategy {
    StrategyName name = StrategyName::random;
    std::map<std::string, double> weights;

    bool operator==(const Strategy&) const = default;
};

std::string_view strategy_name(StrategyName name);
std::optional<StrategyName> strategy_from_name(std::string_view text);

/// Parses "random,least_harm_first,..." into strategies. Throws
/// std::invalid_argument on unknown names.
std::vector<Strategy> parse_lineup(std::string_view text);
std::string lineup_to_string(const std::vector<Strategy>& lineup);

struct BotMemory {
    std::map<int, int> seen_harms;  // harm kind (0 = wild) -> times faced
};

struct BotContext {
    Strategy strategy;
    Rng rng;
    BotMemory memory;
    std::shared_ptr<const Catalog> catalog;

    BotContext(Strategy s, std::uint64_t seed, std::shared_ptr<const Catalog> c)
        : strategy(std::move(s)), rng(seed), catalog(std::move(c)) {}
};

class NoLegalAction : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Picks one of view.legal_actions. Narrated moves come back with a templated
/// narrative filled in.
Action choose_action(BotContext& context, const RedactedView& view);

struct NarrativeContext {
    BusinessId business = 0;
    int harm_kind = 0;           // challenged harm; 0 = wild
    std::optional<int> feature_kind;  // defending feature; 0 = wild; nullopt for a wild harm play
    std::string challenge_narrative;  // text of a wild harm being answered
};

/// Deterministic narrative naming the business and the harm (and, for
/// defenses, a feature that counters it).
std::string narrative_template(const Strategy& strategy, const Catalog& catalog, const NarrativeContext& context);

/// Harm / feature kinds whose titles occur in `text` (case-insensitive).
std::vector<HarmId> claimed_harms(const Catalog& catalog, std::string_view text);
std::vector<FeatureId> claimed_features(const Catalog& catalog, std::string_view text);

}  // namespace aiaudit
