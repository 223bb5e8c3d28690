#pragma once

// WebSocket and HTTP front end for a Hub. WebSocket upgrades on any path
// carry the message protocol; GET /health reports liveness.

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "aiaudit/server/hub.hpp"

namespace aiaudit::server {

struct ListenOptions {
    std::string host = "127.0.0.1";
    std::uint16_t port = 8080;  // 0 picks a free port
    int threads = 1;
    std::chrono::milliseconds tick_interval{1000};
};

class WebServer {
public:
    /// Binds immediately; throws std::system_error if the address is taken.
    WebServer(Hub& hub, ListenOptions options);
    ~WebServer();

    WebServer(const WebServer&) = delete;
    WebServer& operator=(const WebServer&) = delete;

    std::uint16_t port() const;

    /// Serves on background threads until stop().
    void start();
    /// Serves on the calling thread (plus threads - 1 helpers) until stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace aiaudit::server
