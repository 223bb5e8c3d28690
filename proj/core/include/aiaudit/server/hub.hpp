#pragma once

// Transport-independent multiplayer service: lobbies, seats, action routing,
// vote timeouts, reconnection and redacted state sync. Each connection talks
// to the hub through text frames carrying one JSON envelope each.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "aiaudit/catalog.hpp"
#include "aiaudit/game.hpp"

namespace aiaudit::server {

using Clock = std::chrono::steady_clock;
using ConnectionId = std::uint64_t;

/// Delivers one outbound frame. Called with session locks held, so it must
/// not block on or call back into the hub.
using Outbox = std::function<void(const std::string& frame)>;

struct HubOptions {
    std::chrono::milliseconds vote_timeout{std::chrono::seconds(120)};
    /// A seat disconnected for this many vote timeouts becomes a random bot.
    int disconnect_timeouts = 3;
    /// Sessions idle this long are dropped; their tokens then report
    /// session_expired.
    std::chrono::milliseconds session_ttl{std::chrono::hours(2)};

    std::map<std::string, std::shared_ptr<const Catalog>> catalogs{{"default", default_catalog_ptr()}};

    std::function<Clock::time_point()> clock = [] { return Clock::now(); };
    /// Game seeds; defaults to std::random_device.
    std::function<std::uint64_t()> seed_source;
    /// Seed for game ids and resume tokens; 0 draws one from std::random_device.
    std::uint64_t token_seed = 0;

    /// Called after every state change of a running game, before the
    /// resulting messages go out. For audits and tests.
    std::function<void(const std::string& game_id, const GameState& state)> on_state;
};

class Hub {
public:
    explicit Hub(HubOptions options = {});
    ~Hub();

    Hub(const Hub&) = delete;
    Hub& operator=(const Hub&) = delete;

    ConnectionId connect(Outbox outbox);
    void disconnect(ConnectionId id);
    void receive(ConnectionId id, std::string_view frame);

    /// Applies due vote timeouts, bot takeovers of abandoned seats and
    /// session expiry.
    void tick();

    std::size_t session_count() const;
    std::size_t connection_count() const;
    nlohmann::json health() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace aiaudit::server
