#include "aiaudit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "aiaudit/rng.hpp"
#include "aiaudit/serialize.hpp"
#include "aiaudit/structured_text.hpp"
#include "aiaudit/view.hpp"

namespace aiaudit {

using nlohmann::json;

namespace {

double ratio(long long num, long long den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

std::string fixed4(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

// Whose move it is. During a vote the first voter still to cast a ballot.
PlayerId next_actor(const GameState& s) {
    if (const auto* p = std::get_if<SetupRound>(&s.phase)) return p->current;
    if (const auto* p = std::get_if<AwaitingTurnAction>(&s.phase)) return p->active;
    if (const auto* p = std::get_if<AwaitingDefense>(&s.phase)) return p->challenge.defender;
    if (const auto* p = std::get_if<AwaitingVote>(&s.phase)) {
        for (PlayerId v : p->vote.voters) {
            if (!p->vote.ballots.contains(v)) return v;
        }
    }
    return -1;
}

json int_map_to_json(const std::map<int, int>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[std::to_string(k)] = v;
    return out;
}

std::map<int, int> int_map_from_json(const json& j) {
    std::map<int, int> out;
    for (const auto& [k, v] : j.items()) out[std::stoi(k)] = v.get<int>();
    return out;
}

json strategy_to_json(const Strategy& s) {
    if (s.weights.empty()) return std::string(strategy_name(s.name));
    return {{"name", strategy_name(s.name)}, {"weights", s.weights}};
}

Strategy strategy_from_json(const json& j) {
    const std::string name = j.is_string() ? j.get<std::string>() : j.at("name").get<std::string>();
    const auto parsed = strategy_from_name(name);
    if (!parsed) throw std::invalid_argument("unknown bot strategy '" + name + "'");
    Strategy s{*parsed, {}};
    if (j.is_object() && j.contains("weights")) s.weights = j.at("weights").get<std::map<std::string, double>>();
    return s;
}

}  // namespace

void validate_plan(const SimPlan& plan) {
    if (plan.games < 1) throw std::invalid_argument("plan needs at least one game");
    try {
        validate_config(plan.config);
    } catch (const EngineError& e) {
        throw std::invalid_argument(e.what());
    }
    if (static_cast<int>(plan.lineup.size()) != plan.config.player_count) {
        throw std::invalid_argument("lineup has " + std::to_string(plan.lineup.size()) + " bots for " +
                                    std::to_string(plan.config.player_count) + " players");
    }
    for (const auto& s : plan.lineup) {
        for (const auto& [name, w] : s.weights) {
            if (!std::isfinite(w)) throw std::invalid_argument("weight '" + name + "' is not finite");
        }
    }
}

json plan_to_json(const SimPlan& plan) {
    json lineup = json::array();
    for (const auto& s : plan.lineup) lineup.push_back(strategy_to_json(s));
    auto config = config_to_json(plan.config);
    config.erase("seed");
    return {{"games", plan.games},
            {"base_seed", plan.base_seed},
            {"config", config},
            {"lineup", lineup},
            {"rotate_seats", plan.rotate_seats}};
}

SimPlan plan_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("plan must be a mapping");
    static const std::set<std::string> known{"games", "base_seed", "config", "lineup", "rotate_seats"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw std::invalid_argument("unknown plan field '" + key + "'");
    }
    SimPlan plan;
    try {
        plan.games = j.value("games", plan.games);
        plan.base_seed = j.value("base_seed", plan.base_seed);
        plan.rotate_seats = j.value("rotate_seats", plan.rotate_seats);
        if (j.contains("config")) plan.config = config_from_json(j.at("config"));
        if (j.contains("lineup")) {
            for (const auto& s : j.at("lineup")) plan.lineup.push_back(strategy_from_json(s));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad plan field: ") + e.what());
    }
    return plan;
}

SimPlan parse_plan(std::string_view text) {
    try {
        return plan_from_json(parse_structured_text(text));
    } catch (const StructuredTextError& e) {
        throw std::invalid_argument(e.what());
    }
}

// ---------------------------------------------------------------------------

int MatchReport::min_turns() const { return turn_histogram.empty() ? 0 : turn_histogram.begin()->first; }

int MatchReport::max_turns() const { return turn_histogram.empty() ? 0 : turn_histogram.rbegin()->first; }

double MatchReport::mean_turns() const {
    long long total = 0;
    long long count = 0;
    for (const auto& [turns, n] : turn_histogram) {
        total += static_cast<long long>(turns) * n;
        count += n;
    }
    return ratio(total, count);
}

double MatchReport::median_turns() const {
    long long count = 0;
    for (const auto& [_, n] : turn_histogram) count += n;
    if (count == 0) return 0.0;
    // Average of the values at ranks lo and hi (equal for odd counts).
    const long long lo = (count - 1) / 2;
    const long long hi = count / 2;
    long long seen = 0;
    double lo_value = 0;
    double hi_value = 0;
    bool have_lo = false;
    for (const auto& [turns, n] : turn_histogram) {
        if (!have_lo && lo < seen + n) {
            lo_value = turns;
            have_lo = true;
        }
        if (hi < seen + n) {
            hi_value = turns;
            break;
        }
        seen += n;
    }
    return (lo_value + hi_value) / 2.0;
}

double MatchReport::win_rate(const std::string& strategy) const {
    const auto it = wins_by_strategy.find(strategy);
    return ratio(it == wins_by_strategy.end() ? 0 : it->second, games);
}

double MatchReport::stalemate_rate() const { return ratio(stalemates, games); }

double MatchReport::defense_success_rate() const { return ratio(defense_successes, defense_attempts); }

double MatchReport::survival_rate(int business_kind) const {
    const auto set_up = business_setups.find(business_kind);
    const auto survived = business_survivals.find(business_kind);
    return ratio(survived == business_survivals.end() ? 0 : survived->second,
                 set_up == business_setups.end() ? 0 : set_up->second);
}

int MatchReport::challenges() const {
    int total = 0;
    for (const auto& [_, n] : harm_usage) total += n;
    return total;
}

// ---------------------------------------------------------------------------

Strategy seat_strategy(const SimPlan& plan, int index, PlayerId seat) {
    const auto n = plan.lineup.size();
    const auto offset = plan.rotate_seats ? static_cast<std::size_t>(index) % n : 0;
    return plan.lineup[(static_cast<std::size_t>(seat) + offset) % n];
}

void play_game(const SimPlan& plan, int index, std::shared_ptr<const Catalog> catalog, MatchReport& report) {
    const std::uint64_t seed = split_seed(plan.base_seed, static_cast<std::uint64_t>(index));
    GameConfig config = plan.config;
    config.seed = seed;
    const int n = config.player_count;

    try {
        GameState state = new_game(config, catalog);
        std::vector<BotContext> bots;
        bots.reserve(static_cast<std::size_t>(n));
        for (PlayerId p = 0; p < n; ++p) {
            bots.emplace_back(seat_strategy(plan, index, p), split_seed(seed, 1 + static_cast<std::uint64_t>(p)),
                              catalog);
        }
        const ViewOptions options{.include_log = false};
        bool pending_wild = false;
        bool pending_narrated = false;

        while (!std::holds_alternative<Terminal>(state.phase)) {
            const PlayerId actor = next_actor(state);
            const auto view = view_for(state, Viewer::seat(actor), options);
            const Action action = choose_action(bots[static_cast<std::size_t>(actor)], view);

            if (const auto* a = std::get_if<SetupBusiness>(&action)) {
                report.business_setups[a->business.kind] += 1;
            } else if (const auto* a = std::get_if<PlayHarm>(&action)) {
                report.harm_usage[a->harm.kind] += 1;
            } else if (std::holds_alternative<PlayWildHarm>(action)) {
                report.harm_usage[0] += 1;
                report.wilds_played += 1;
                pending_wild = true;
            } else if (std::holds_alternative<DefendWild>(action)) {
                report.wilds_played += 1;
                pending_wild = true;
            } else if (std::holds_alternative<DefendWithNarrative>(action)) {
                report.narrated_defenses += 1;
                pending_narrated = true;
            } else if (std::holds_alternative<ExchangeHarm>(action)) {
                report.exchanges += 1;
            }

            const auto events = apply_in_place(state, actor, action);
            state.event_log.clear();
            for (const auto& e : events) {
                switch (e.type) {
                    case EventType::defense_succeeded:
                        report.defense_attempts += 1;
                        report.defense_successes += 1;
                        break;
                    case EventType::defense_failed:
                        report.defense_attempts += 1;
                        break;
                    case EventType::vote_resolved:
                        if (*e.approved) {
                            if (pending_wild) report.wilds_approved += 1;
                            if (pending_narrated) report.narrated_approved += 1;
                        }
                        pending_wild = false;
                        pending_narrated = false;
                        break;
                    default:
                        break;
                }
            }
        }

        const auto& outcome = std::get<Terminal>(state.phase).outcome;
        report.games += 1;
        if (report.wins_by_seat.size() < static_cast<std::size_t>(n)) report.wins_by_seat.resize(static_cast<std::size_t>(n), 0);
        if (report.lineup.empty()) {
            for (const auto& s : plan.lineup) report.lineup.emplace_back(strategy_name(s.name));
        }
        for (const auto& s : plan.lineup) report.wins_by_strategy.try_emplace(std::string(strategy_name(s.name)), 0);
        if (outcome.kind == OutcomeKind::win) {
            const PlayerId w = *outcome.winner;
            report.wins_by_seat[static_cast<std::size_t>(w)] += 1;
            report.wins_by_strategy[std::string(strategy_name(seat_strategy(plan, index, w).name))] += 1;
        } else {
            report.stalemates += 1;
        }
        report.turn_histogram[state.turn_counter] += 1;
        for (const auto& z : state.zones.players) {
            for (const auto& b : z.in_play) report.business_survivals[b.kind] += 1;
        }
    } catch (const EngineError& e) {
        throw SimError(seed, e.what());
    } catch (const NoLegalAction& e) {
        throw SimError(seed, e.what());
    }
}

MatchReport run(const SimPlan& plan, std::shared_ptr<const Catalog> catalog) {
    validate_plan(plan);
    MatchReport report;
    for (int i = 0; i < plan.games; ++i) play_game(plan, i, catalog, report);
    return report;
}

PairedReport compare(const SimPlan& a, const SimPlan& b, std::shared_ptr<const Catalog> catalog) {
    if (a.games != b.games || a.base_seed != b.base_seed || a.lineup != b.lineup || a.rotate_seats != b.rotate_seats) {
        throw std::invalid_argument("mismatched plans: only the config may differ");
    }
    return {run(a, catalog), run(b, catalog)};
}

// ---------------------------------------------------------------------------

json report_to_json(const MatchReport& r) {
    json strategies = json::object();
    for (const auto& [name, wins] : r.wins_by_strategy) {
        strategies[name] = {{"wins", wins}, {"win_rate", r.win_rate(name)}};
    }
    json survival = json::object();
    for (const auto& [kind, setups] : r.business_setups) {
        const auto it = r.business_survivals.find(kind);
        survival[std::to_string(kind)] = {{"set_up", setups},
                                          {"survived", it == r.business_survivals.end() ? 0 : it->second},
                                          {"rate", r.survival_rate(kind)}};
    }
    return {{"games", r.games},
            {"lineup", r.lineup},
            {"strategies", strategies},
            {"wins_by_seat", r.wins_by_seat},
            {"stalemates", r.stalemates},
            {"stalemate_rate", r.stalemate_rate()},
            {"turns",
             {{"histogram", int_map_to_json(r.turn_histogram)},
              {"min", r.min_turns()},
              {"mean", r.mean_turns()},
              {"median", r.median_turns()},
              {"max", r.max_turns()}}},
            {"defense",
             {{"attempts", r.defense_attempts},
              {"successes", r.defense_successes},
              {"success_rate", r.defense_success_rate()}}},
            {"harm_usage", int_map_to_json(r.harm_usage)},
            {"business_survival", survival},
            {"exchanges", r.exchanges},
            {"wilds", {{"played", r.wilds_played}, {"approved", r.wilds_approved}}},
            {"narrated_defenses", {{"played", r.narrated_defenses}, {"approved", r.narrated_approved}}}};
}

MatchReport report_from_json(const json& j) {
    try {
        MatchReport r;
        r.games = j.at("games").get<int>();
        r.lineup = j.at("lineup").get<std::vector<std::string>>();
        for (const auto& [name, entry] : j.at("strategies").items()) r.wins_by_strategy[name] = entry.at("wins").get<int>();
        r.wins_by_seat = j.at("wins_by_seat").get<std::vector<int>>();
        r.stalemates = j.at("stalemates").get<int>();
        r.turn_histogram = int_map_from_json(j.at("turns").at("histogram"));
        r.defense_attempts = j.at("defense").at("attempts").get<int>();
        r.defense_successes = j.at("defense").at("successes").get<int>();
        r.harm_usage = int_map_from_json(j.at("harm_usage"));
        for (const auto& [kind, entry] : j.at("business_survival").items()) {
            r.business_setups[std::stoi(kind)] = entry.at("set_up").get<int>();
            const int survived = entry.at("survived").get<int>();
            if (survived > 0) r.business_survivals[std::stoi(kind)] = survived;
        }
        r.exchanges = j.at("exchanges").get<int>();
        r.wilds_played = j.at("wilds").at("played").get<int>();
        r.wilds_approved = j.at("wilds").at("approved").get<int>();
        r.narrated_defenses = j.at("narrated_defenses").at("played").get<int>();
        r.narrated_approved = j.at("narrated_defenses").at("approved").get<int>();
        return r;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
}

namespace {

std::string csv_rows(const MatchReport& r, const std::string& label) {
    std::ostringstream out;
    const std::string prefix = label.empty() ? "" : label + ",";
    for (const auto& [name, wins] : r.wins_by_strategy) {
        out << prefix << "strategy," << name << ',' << r.games << ',' << wins << ',' << fixed4(r.win_rate(name))
            << ",,,,,,,,,\n";
    }
    out << prefix << "summary,all," << r.games << ',' << (r.games - r.stalemates) << ','
        << fixed4(ratio(r.games - r.stalemates, r.games)) << ',' << r.stalemates << ',' << fixed4(r.stalemate_rate())
        << ',' << r.min_turns() << ',' << fixed4(r.mean_turns()) << ',' << fixed4(r.median_turns()) << ','
        << r.max_turns() << ',' << r.defense_attempts << ',' << r.defense_successes << ','
        << fixed4(r.defense_success_rate()) << '\n';
    return out.str();
}

constexpr const char* kCsvHeader =
    "row,strategy,games,wins,win_rate,stalemates,stalemate_rate,min_turns,mean_turns,median_turns,max_turns,"
    "defense_attempts,defense_successes,defense_success_rate\n";

}  // namespace

std::string emit_report(const MatchReport& report, ReportFormat format) {
    if (format == ReportFormat::json) return report_to_json(report).dump(2) + "\n";
    return kCsvHeader + csv_rows(report, "");
}

std::string emit_paired(const PairedReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        json out{{"a", report_to_json(report.a)},
                 {"b", report_to_json(report.b)},
                 {"delta",
                  {{"mean_turns", report.mean_turns_delta()},
                   {"median_turns", report.median_turns_delta()},
                   {"defense_success_rate", report.defense_success_rate_delta()},
                   {"stalemate_rate", report.stalemate_rate_delta()}}}};
        return out.dump(2) + "\n";
    }
    std::string out = std::string("variant,") + kCsvHeader;
    out += csv_rows(report.a, "a");
    out += csv_rows(report.b, "b");
    out += "delta,summary,all,,,,," + fixed4(report.stalemate_rate_delta()) + ",," +
           fixed4(report.mean_turns_delta()) + "," + fixed4(report.median_turns_delta()) + ",,,," +
           fixed4(report.defense_success_rate_delta()) + "\n";
    return out;
}

}  // namespace aiaudit
