#include <doctest.h>

#include "aiaudit/server/hub.hpp"
#include "aiaudit/server/transport.hpp"
#include "ws_client.hpp"

using namespace aiaudit::server;
using nlohmann::json;

TEST_CASE("health endpoint and websocket greeting") {
    Hub hub;
    WebServer server(hub, ListenOptions{.host = "127.0.0.1", .port = 0});
    server.start();
    const auto port = server.port();
    REQUIRE(port != 0);

    const auto [status, body] = wstest::http_get("127.0.0.1", port, "/health");
    CHECK(status == 200);
    const auto health = json::parse(body);
    CHECK(health.at("status") == "ok");
    CHECK(health.at("sessions") == 0);
    CHECK(wstest::http_get("127.0.0.1", port, "/healthz").first == 200);
    CHECK(wstest::http_get("127.0.0.1", port, "/elsewhere").first == 404);

    wstest::Loop loop;
    auto ws = wstest::Client::connect(loop, "127.0.0.1", port);
    const auto id = ws->send("hello");
    const auto welcome = ws->await_reply(id);
    REQUIRE(welcome);
    CHECK(welcome->at("type") == "welcome");
    CHECK(welcome->at("payload").at("protocol") == 1);

    ws->send_raw("not json");
    const auto err = ws->next();
    REQUIRE(err);
    CHECK(err->at("payload").at("code") == "bad_frame");

    const auto created = ws->send("create", {{"config", {{"player_count", 2}}}, {"bots", {"random"}}});
    const auto ack = ws->await_reply(created);
    REQUIRE(ack);
    CHECK(ack->at("type") == "ack");
    CHECK(json::parse(wstest::http_get("127.0.0.1", port, "/health").second).at("sessions") == 1);

    ws->close();
    for (int i = 0; i < 100 && hub.connection_count() > 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    CHECK(hub.connection_count() == 0);
    server.stop();
}
