#include "aiaudit/server/transport.hpp"

#include <deque>
#include <thread>
#include <vector>

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace aiaudit::server {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

    void run(http::request<http::string_body> request) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(request, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return;
        std::weak_ptr<WsSession> weak = shared_from_this();
        auto executor = ws_.get_executor();
        id_ = hub_.connect([weak, executor](const std::string& frame) {
            net::post(executor, [weak, frame] {
                if (auto self = weak.lock()) self->enqueue(frame);
            });
        });
        connected_ = true;
        do_read();
    }

    void do_read() {
        ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            if (connected_) hub_.disconnect(id_);
            connected_ = false;
            return;
        }
        const std::string frame = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        hub_.receive(id_, frame);
        do_read();
    }

    void enqueue(std::string frame) {
        queue_.push_back(std::move(frame));
        if (queue_.size() == 1) do_write();
    }

    void do_write() {
        ws_.text(true);
        ws_.async_write(net::buffer(queue_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        if (ec) return;
        queue_.pop_front();
        if (!queue_.empty()) do_write();
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;
    Hub& hub_;
    ConnectionId id_ = 0;
    bool connected_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, Hub& hub) : stream_(std::move(socket)), hub_(hub) {}

    void run() {
        net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
    }

private:
    void do_read() {
        request_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, request_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (websocket::is_upgrade(request_)) {
            stream_.expires_never();
            std::make_shared<WsSession>(stream_.release_socket(), hub_)->run(std::move(request_));
            return;
        }
        auto response = std::make_shared<http::response<http::string_body>>();
        response->version(request_.version());
        response->keep_alive(request_.keep_alive());
        response->set(http::field::server, "aiaudit");
        response->set(http::field::content_type, "application/json");
        const auto target = std::string(request_.target());
        if (request_.method() == http::verb::get && (target == "/health" || target == "/healthz")) {
            response->result(http::status::ok);
            response->body() = hub_.health().dump();
        } else {
            response->result(http::status::not_found);
            response->body() = R"({"error":"not found"})";
        }
        response->prepare_payload();
        http::async_write(stream_, *response,
                          [self = shared_from_this(), response](beast::error_code ec, std::size_t) {
                              if (ec || !response->keep_alive()) {
                                  self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                                  return;
                              }
                              self->do_read();
                          });
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
    Hub& hub_;
};

}  // namespace

struct WebServer::Impl {
    Hub& hub;
    ListenOptions options;
    net::io_context ioc;
    tcp::acceptor acceptor;
    net::steady_timer timer;
    std::vector<std::thread> threads;

    Impl(Hub& h, ListenOptions o)
        : hub(h), options(std::move(o)), ioc(std::max(1, options.threads)), acceptor(net::make_strand(ioc)),
          timer(ioc) {
        const tcp::endpoint endpoint(net::ip::make_address(options.host), options.port);
        acceptor.open(endpoint.protocol());
        acceptor.set_option(net::socket_base::reuse_address(true));
        acceptor.bind(endpoint);
        acceptor.listen(net::socket_base::max_listen_connections);
        do_accept();
        schedule_tick();
    }

    void do_accept() {
        acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (ec == net::error::operation_aborted) return;
            if (!ec) std::make_shared<HttpSession>(std::move(socket), hub)->run();
            do_accept();
        });
    }

    void schedule_tick() {
        timer.expires_after(options.tick_interval);
        timer.async_wait([this](beast::error_code ec) {
            if (ec) return;
            hub.tick();
            schedule_tick();
        });
    }
};

WebServer::WebServer(Hub& hub, ListenOptions options) : impl_(std::make_unique<Impl>(hub, std::move(options))) {}

WebServer::~WebServer() { stop(); }

std::uint16_t WebServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WebServer::start() {
    for (int i = 0; i < std::max(1, impl_->options.threads); ++i) {
        impl_->threads.emplace_back([this] { impl_->ioc.run(); });
    }
}

void WebServer::run() {
    for (int i = 1; i < std::max(1, impl_->options.threads); ++i) {
        impl_->threads.emplace_back([this] { impl_->ioc.run(); });
    }
    impl_->ioc.run();
}

void WebServer::stop() {
    if (!impl_) return;
    impl_->ioc.stop();
    for (auto& t : impl_->threads) {
        if (t.joinable() && t.get_id() != std::this_thread::get_id()) t.join();
    }
    impl_->threads.clear();
}

}  // namespace aiaudit::server
