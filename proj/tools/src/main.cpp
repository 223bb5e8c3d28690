#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "aiaudit/catalog.hpp"
#include "aiaudit/engine.hpp"
#include "aiaudit/print_sheets.hpp"
#include "aiaudit/replay.hpp"
#include "aiaudit/serialize.hpp"
#include "aiaudit/server/hub.hpp"
#include "aiaudit/server/transport.hpp"
#include "aiaudit/sim.hpp"
#include "aiaudit/structured_text.hpp"
#include "cli.hpp"

namespace {

using namespace aiaudit;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Failure {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{"cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content)) throw Failure{"cannot write " + path};
}

std::shared_ptr<const Catalog> open_catalog(std::string path) {
    if (path.empty()) {
        if (const char* env = std::getenv("AIAUDIT_CATALOG"); env != nullptr && *env != '\0') path = env;
    }
    if (path.empty()) return default_catalog_ptr();
    try {
        return std::make_shared<const Catalog>(load_catalog(read_file(path)));
    } catch (const CatalogError& e) {
        throw Failure{path + ": " + e.what()};
    }
}

GameConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    try {
        return config_from_json(parse_structured_text(read_file(path)));
    } catch (const StructuredTextError& e) {
        throw Failure{path + ": " + e.what()};
    } catch (const std::invalid_argument& e) {
        throw Failure{path + ": " + e.what()};
    }
}

std::uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ReportFormat parse_format(const std::string& format, const std::string& out) {
    if (format == "json") return ReportFormat::json;
    if (format == "csv") return ReportFormat::csv;
    return out.size() > 4 && out.ends_with(".csv") ? ReportFormat::csv : ReportFormat::json;
}

// --------------------------------------------------------------------------

int cmd_validate(const std::string& catalog_path, bool as_json) {
    const auto catalog = open_catalog(catalog_path);
    const auto report = validate(*catalog);
    if (as_json) {
        nlohmann::json out{{"errors", nlohmann::json::array()}, {"warnings", nlohmann::json::array()}};
        for (const auto& f : report.errors) out["errors"].push_back({{"code", f.code}, {"message", f.message}});
        for (const auto& f : report.warnings) out["warnings"].push_back({{"code", f.code}, {"message", f.message}});
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& f : report.errors) std::cout << "error " << f.code << ": " << f.message << "\n";
        for (const auto& f : report.warnings) std::cout << "warning " << f.code << ": " << f.message << "\n";
        std::cerr << report.errors.size() << " error(s), " << report.warnings.size() << " warning(s)\n";
    }
    return report.playable() ? kOk : kFailure;
}

int cmd_export(const std::string& catalog_path, const std::string& out_dir, const PrintOptions& options) {
    const auto catalog = open_catalog(catalog_path);
    try {
        for (const auto& path : export_print_sheets(*catalog, options, out_dir)) std::cout << path.string() << "\n";
    } catch (const ExportError& e) {
        throw Failure{e.what()};
    }
    return kOk;
}

struct SimArgs {
    int games = 1000;
    std::uint64_t seed = 0;
    std::string bots = "random,random,random,random";
    std::string config;
    std::string plan;
    std::string out;
    std::string format = "auto";
    bool no_rotate = false;
};

SimPlan make_plan(const SimArgs& args, const std::string& config_path, const CLI::App& sub) {
    SimPlan plan;
    if (!args.plan.empty()) {
        try {
            plan = parse_plan(read_file(args.plan));
        } catch (const std::invalid_argument& e) {
            throw Failure{args.plan + ": " + e.what()};
        }
    }
    if (args.plan.empty() || sub.count("--games") > 0) plan.games = args.games;
    if (args.plan.empty() || sub.count("--seed") > 0) plan.base_seed = args.seed;
    if (args.plan.empty() || sub.count("--bots") > 0) {
        try {
            plan.lineup = parse_lineup(args.bots);
        } catch (const std::invalid_argument& e) {
            throw Failure{e.what()};
        }
    }
    if (!config_path.empty()) plan.config = load_config(config_path);
    if (args.plan.empty() && config_path.empty()) plan.config.player_count = static_cast<int>(plan.lineup.size());
    if (args.no_rotate) plan.rotate_seats = false;
    try {
        validate_plan(plan);
    } catch (const std::invalid_argument& e) {
        throw Failure{e.what()};
    }
    return plan;
}

int cmd_simulate(const SimArgs& args, const std::string& catalog_path, const CLI::App& sub) {
    const auto catalog = open_catalog(catalog_path);
    const auto plan = make_plan(args, args.config, sub);
    std::cerr << "simulating " << plan.games << " games of " << lineup_to_string(plan.lineup) << "\n";
    try {
        const auto report = run(plan, catalog);
        write_output(args.out, emit_report(report, parse_format(args.format, args.out)));
    } catch (const SimError& e) {
        throw Failure{e.what()};
    }
    return kOk;
}

int cmd_compare(const SimArgs& args, const std::string& config_a, const std::string& config_b,
                const std::string& catalog_path, const CLI::App& sub) {
    const auto catalog = open_catalog(catalog_path);
    const auto a = make_plan(args, config_a, sub);
    const auto b = make_plan(args, config_b, sub);
    std::cerr << "comparing " << a.games << " paired games of " << lineup_to_string(a.lineup) << "\n";
    try {
        const auto paired = compare(a, b, catalog);
        write_output(args.out, emit_paired(paired, parse_format(args.format, args.out)));
        std::cerr << "mean turns " << paired.a.mean_turns() << " -> " << paired.b.mean_turns()
                  << ", defense success " << paired.a.defense_success_rate() << " -> "
                  << paired.b.defense_success_rate() << "\n";
    } catch (const SimError& e) {
        throw Failure{e.what()};
    } catch (const std::invalid_argument& e) {
        throw Failure{e.what()};
    }
    return kOk;
}

server::WebServer* running_server = nullptr;

void on_signal(int) {
    if (running_server != nullptr) running_server->stop();
}

int cmd_serve(const std::string& addr, const std::string& catalog_path, double vote_timeout, int threads) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw Failure{"--addr must be HOST:PORT"};
    server::ListenOptions listen;
    listen.host = addr.substr(0, colon);
    try {
        const int port = std::stoi(addr.substr(colon + 1));
        if (port < 0 || port > 65535) throw std::out_of_range("port");
        listen.port = static_cast<std::uint16_t>(port);
    } catch (const std::exception&) {
        throw Failure{"bad port in --addr " + addr};
    }
    listen.threads = threads;

    server::HubOptions hub_options;
    if (!catalog_path.empty()) hub_options.catalogs["default"] = open_catalog(catalog_path);
    hub_options.vote_timeout = std::chrono::milliseconds(static_cast<long long>(vote_timeout * 1000));
    server::Hub hub(std::move(hub_options));
    try {
        server::WebServer web(hub, listen);
        running_server = &web;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cerr << "serving on " << listen.host << ":" << web.port() << " (websocket; GET /health)\n";
        web.run();
        running_server = nullptr;
    } catch (const std::system_error& e) {
        throw Failure{"cannot listen on " + addr + ": " + e.what()};
    }
    return kOk;
}

int cmd_play(const std::string& bots, std::optional<std::uint64_t> seed, const std::string& config_path,
             const std::string& catalog_path, const std::string& log_out) {
    cli::PlaySetup setup;
    setup.catalog = open_catalog(catalog_path);
    try {
        setup.bots = parse_lineup(bots);
    } catch (const std::invalid_argument& e) {
        throw Failure{e.what()};
    }
    setup.config = load_config(config_path);
    setup.config.player_count = static_cast<int>(setup.bots.size()) + 1;
    setup.config.seed = seed ? *seed : random_seed();
    try {
        validate_config(setup.config);
    } catch (const EngineError& e) {
        throw Failure{e.what()};
    }
    const auto result = cli::play(setup, std::cin, std::cerr);
    if (!log_out.empty()) write_output(log_out, serialize_action_log(result.log));
    return result.finished ? kOk : kFailure;
}

int cmd_replay(const std::string& log_path, const std::string& catalog_path) {
    const auto catalog = open_catalog(catalog_path);
    ActionLog log;
    try {
        log = parse_action_log(read_file(log_path));
    } catch (const LogFormatError& e) {
        throw Failure{log_path + ": " + e.what()};
    }
    try {
        const auto state = replay(log, catalog);
        std::cout << "ok " << digest_hex(state_digest(state)) << " after " << log.records.size() << " actions\n";
    } catch (const ReplayDivergence& e) {
        std::cout << "diverged at step " << e.step() << "\n";
        std::cerr << e.what() << "\n";
        return kFailure;
    } catch (const EngineError& e) {
        throw Failure{e.what()};
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AI Audit card game: catalog tools, simulator, server and terminal play"};
    app.require_subcommand(1);
    std::string catalog_path;
    app.add_option("--catalog", catalog_path, "Catalog file (default: $AIAUDIT_CATALOG or built-in)");

    auto* validate_cmd = app.add_subcommand("validate", "Check a catalog and print findings");
    bool as_json = false;
    validate_cmd->add_option("--catalog", catalog_path, "Catalog file");
    validate_cmd->add_flag("--json", as_json, "Print findings as JSON");

    auto* export_cmd = app.add_subcommand("export", "Write print-and-play sheets");
    std::string out_dir;
    PrintOptions print;
    export_cmd->add_option("--out", out_dir, "Output directory")->required();
    export_cmd->add_option("--catalog", catalog_path, "Catalog file");
    export_cmd->add_option("--harm-copies", print.harm_copies_per_kind, "Copies per harm kind")->check(CLI::NonNegativeNumber);
    export_cmd->add_option("--feature-copies", print.feature_copies_per_kind, "Copies per feature kind")
        ->check(CLI::NonNegativeNumber);
    export_cmd->add_option("--wild-harms", print.wild_harm_copies, "Wild harm copies")->check(CLI::NonNegativeNumber);
    export_cmd->add_option("--wild-features", print.wild_feature_copies, "Wild feature copies")
        ->check(CLI::NonNegativeNumber);

    SimArgs sim;
    auto add_sim_options = [&](CLI::App* sub) {
        sub->add_option("--games", sim.games, "Number of games")->check(CLI::PositiveNumber);
        sub->add_option("--seed", sim.seed, "Base seed");
        sub->add_option("--bots", sim.bots, "Comma-separated strategies, one per seat");
        sub->add_option("--plan", sim.plan, "Plan file (games, base_seed, config, lineup)");
        sub->add_option("--out", sim.out, "Report file (default stdout)");
        sub->add_option("--format", sim.format, "json, csv or auto (from --out suffix)")
            ->check(CLI::IsMember({"auto", "json", "csv"}));
        sub->add_flag("--no-rotate", sim.no_rotate, "Keep strategies in fixed seats");
        sub->add_option("--catalog", catalog_path, "Catalog file");
    };
    auto* simulate_cmd = app.add_subcommand("simulate", "Run seeded bot games and report statistics");
    add_sim_options(simulate_cmd);
    simulate_cmd->add_option("--config", sim.config, "Game config file");

    auto* compare_cmd = app.add_subcommand("compare", "Paired simulation of two configs");
    add_sim_options(compare_cmd);
    std::string config_a;
    std::string config_b;
    compare_cmd->add_option("--config-a", config_a, "Config file for variant A")->required();
    compare_cmd->add_option("--config-b", config_b, "Config file for variant B")->required();

    auto* serve_cmd = app.add_subcommand("serve", "Run the multiplayer server");
    std::string addr = "127.0.0.1:8080";
    double vote_timeout = 120;
    int threads = 1;
    serve_cmd->add_option("--addr", addr, "HOST:PORT to listen on");
    serve_cmd->add_option("--vote-timeout", vote_timeout, "Seconds before missing ballots count as rejections")
        ->check(CLI::PositiveNumber);
    serve_cmd->add_option("--threads", threads, "I/O threads")->check(CLI::Range(1, 64));
    serve_cmd->add_option("--catalog", catalog_path, "Catalog file");

    auto* play_cmd = app.add_subcommand("play", "Play in the terminal against bots");
    std::string play_bots;
    std::optional<std::uint64_t> play_seed;
    std::string play_config;
    std::string log_out;
    play_cmd->add_option("--bots", play_bots, "Opponent strategies")->required();
    play_cmd->add_option("--seed", play_seed, "Game seed");
    play_cmd->add_option("--config", play_config, "Game config file");
    play_cmd->add_option("--log-out", log_out, "Write the action log here");
    play_cmd->add_option("--catalog", catalog_path, "Catalog file");

    auto* replay_cmd = app.add_subcommand("replay", "Verify a recorded game");
    std::string log_path;
    replay_cmd->add_option("--log", log_path, "Action log file")->required();
    replay_cmd->add_option("--catalog", catalog_path, "Catalog file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*validate_cmd) return cmd_validate(catalog_path, as_json);
        if (*export_cmd) return cmd_export(catalog_path, out_dir, print);
        if (*simulate_cmd) return cmd_simulate(sim, catalog_path, *simulate_cmd);
        if (*compare_cmd) return cmd_compare(sim, config_a, config_b, catalog_path, *compare_cmd);
        if (*serve_cmd) return cmd_serve(addr, catalog_path, vote_timeout, threads);
        if (*play_cmd) return cmd_play(play_bots, play_seed, play_config, catalog_path, log_out);
        if (*replay_cmd) return cmd_replay(log_path, catalog_path);
    } catch (const Failure& f) {
        std::cerr << "aiaudit: " << f.message << "\n";
        return kFailure;
    }
    return kUsage;
}
