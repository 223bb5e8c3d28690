#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aiaudit/bots.hpp"
#include "aiaudit/engine.hpp"

namespace aiaudit {

struct SimPlan {
    int games = 1;
    std::uint64_t base_seed = 0;
    GameConfig config;  // seed is ignored; each game gets split_seed(base_seed, i)
    std::vector<Strategy> lineup;
    bool rotate_seats = true;

    bool operator==(const SimPlan&) const = default;
};

/// Throws std::invalid_argument when the plan cannot run.
void validate_plan(const SimPlan& plan);

nlohmann::json plan_to_json(const SimPlan& plan);
SimPlan plan_from_json(const nlohmann::json& j);
SimPlan parse_plan(std::string_view text);

/// Aggregated counts over a batch of games. Rates are derived on output.
struct MatchReport {
    int games = 0;
    std::vector<std::string> lineup;
    std::map<std::string, int> wins_by_strategy;
    std::vector<int> wins_by_seat;
    int stalemates = 0;
    std::map<int, int> turn_histogram;  // final turn counter -> games
    int defense_attempts = 0;           // challenges that reached the defender
    int defense_successes = 0;
    std::map<int, int> harm_usage;  // harm kind played as a challenge; 0 = wild
    std::map<int, int> business_setups;
    std::map<int, int> business_survivals;  // still in play at game end
    int exchanges = 0;
    int wilds_played = 0;  // wild harms and wild features
    int wilds_approved = 0;
    int narrated_defenses = 0;
    int narrated_approved = 0;

    int min_turns() const;
    int max_turns() const;
    double mean_turns() const;
    double median_turns() const;
    double win_rate(const std::string& strategy) const;
    double stalemate_rate() const;
    double defense_success_rate() const;
    double survival_rate(int business_kind) const;
    int challenges() const;

    bool operator==(const MatchReport&) const = default;
};

class SimError : public std::runtime_error {
public:
    SimError(std::uint64_t seed, const std::string& what)
        : std::runtime_error("game with seed " + std::to_string(seed) + " failed: " + what), seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

/// Strategy seated at `seat` in game `index`.
Strategy seat_strategy(const SimPlan& plan, int index, PlayerId seat);

/// Plays one game of the plan and folds it into `report`.
void play_game(const SimPlan& plan, int index, std::shared_ptr<const Catalog> catalog, MatchReport& report);

MatchReport run(const SimPlan& plan, std::shared_ptr<const Catalog> catalog = default_catalog_ptr());

struct PairedReport {
    MatchReport a;
    MatchReport b;

    double mean_turns_delta() const { return b.mean_turns() - a.mean_turns(); }
    double median_turns_delta() const { return b.median_turns() - a.median_turns(); }
    double defense_success_rate_delta() const { return b.defense_success_rate() - a.defense_success_rate(); }
    double stalemate_rate_delta() const { return b.stalemate_rate() - a.stalemate_rate(); }
};

/// Throws std::invalid_argument ("mismatched plans") unless the plans differ
/// only in their config.
PairedReport compare(const SimPlan& a, const SimPlan& b,
                     std::shared_ptr<const Catalog> catalog = default_catalog_ptr());

nlohmann::json report_to_json(const MatchReport& report);
MatchReport report_from_json(const nlohmann::json& j);

enum class ReportFormat { json, csv };

std::string emit_report(const MatchReport& report, ReportFormat format);
std::string emit_paired(const PairedReport& report, ReportFormat format);

}  // namespace aiaudit
