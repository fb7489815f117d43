#include "chirono/ws_server.hpp"
#include "chirono/error.hpp"

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <iostream>
#include <thread>

namespace chirono {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

std::pair<std::string, unsigned short> parse_listen(const std::string& addr) {
    std::string host = "127.0.0.1";
    std::string port = addr;
    if (auto colon = addr.rfind(':'); colon != std::string::npos) {
        if (colon > 0) host = addr.substr(0, colon);
        port = addr.substr(colon + 1);
    }
    try {
        std::size_t used = 0;
        const int p = std::stoi(port, &used);
        if (used != port.size() || p < 0 || p > 65535) throw std::invalid_argument(port);
        return {host, static_cast<unsigned short>(p)};
    } catch (const std::exception&) {
        throw Error(Errc::InvalidConfig, "bad listen address '" + addr + "'");
    }
}

namespace {

Role role_from_target(std::string_view target) {
    const auto q = target.find('?');
    if (q == std::string_view::npos) return Role::Audience;
    std::string_view query = target.substr(q + 1);
    while (!query.empty()) {
        const auto amp = query.find('&');
        std::string_view kv = query.substr(0, amp);
        if (kv.starts_with("role=")) {
            if (auto r = parse_role(kv.substr(5))) return *r;
        }
        if (amp == std::string_view::npos) break;
        query.remove_prefix(amp + 1);
    }
    return Role::Audience;
}

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, SessionHub& hub) : ws_(std::move(socket)), hub_(hub) {}

    void start() {
        http::async_read(ws_.next_layer(), buffer_, request_,
                         [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_request(ec); });
    }

private:
    void on_request(beast::error_code ec) {
        if (ec) return;
        const Role role = role_from_target(std::string_view(request_.target().data(), request_.target().size()));
        ws_.async_accept(request_, [self = shared_from_this(), role](beast::error_code ec2) {
            if (!ec2) self->on_accept(role);
        });
    }

    void on_accept(Role role) {
        std::weak_ptr<Connection> weak = shared_from_this();
        auto exec = ws_.get_executor();
        try {
            id_ = hub_.accept(role, [weak, exec] {
                net::post(exec, [weak] {
                    if (auto self = weak.lock()) self->flush();
                });
            });
            accepted_ = true;
        } catch (const Error& e) {
            nlohmann::json payload{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
            outgoing_.push_back(encode({std::string(kMsgError), 0, 0, payload}));
            close_after_write_ = true;
            write_next();
            return;
        }
        read_next();
    }

    void flush() {
        if (!accepted_) return;
        for (auto& m : hub_.drain(id_)) outgoing_.push_back(std::move(m));
        if (!writing_) write_next();
    }

    void write_next() {
        if (outgoing_.empty()) {
            writing_ = false;
            if (close_after_write_) {
                ws_.async_close(websocket::close_code::policy_error, [self = shared_from_this()](beast::error_code) {});
            }
            return;
        }
        writing_ = true;
        ws_.text(true);
        ws_.async_write(net::buffer(outgoing_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->shutdown();
            self->outgoing_.pop_front();
            self->write_next();
        });
    }

    void read_next() {
        ws_.async_read(read_buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return self->shutdown();
            self->hub_.submit(self->id_, beast::buffers_to_string(self->read_buffer_.data()));
            self->read_buffer_.consume(self->read_buffer_.size());
            self->read_next();
        });
    }

    void shutdown() {
        if (accepted_) hub_.disconnect(id_);
        accepted_ = false;
    }

    websocket::stream<beast::tcp_stream> ws_;
    SessionHub& hub_;
    beast::flat_buffer buffer_;
    beast::flat_buffer read_buffer_;
    http::request<http::string_body> request_;
    ClientId id_ = 0;
    bool accepted_ = false;
    bool writing_ = false;
    bool close_after_write_ = false;
    std::deque<std::string> outgoing_;
};

} // namespace

struct WsServer::Impl {
    SessionHub& hub;
    net::io_context ioc;
    tcp::acceptor acceptor{ioc};
    std::vector<std::thread> threads;

    explicit Impl(SessionHub& h) : hub(h) {}

    void accept_next() {
        acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (ec) return; // acceptor closed
            std::make_shared<Connection>(std::move(socket), hub)->start();
            accept_next();
        });
    }
};

WsServer::WsServer(SessionHub& hub, const std::string& listen, unsigned threads) : impl_(std::make_unique<Impl>(hub)) {
    const auto [host, port] = parse_listen(listen);
    beast::error_code ec;
    const auto address = net::ip::make_address(host, ec);
    if (ec) throw Error(Errc::InvalidConfig, "bad listen host '" + host + "'");
    const tcp::endpoint ep{address, port};
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(net::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep, ec);
    if (ec) throw Error(Errc::Io, "cannot listen on " + listen + ": " + ec.message());
    impl_->acceptor.listen();
    impl_->accept_next();
    for (unsigned i = 0; i < std::max(1u, threads); ++i) {
        impl_->threads.emplace_back([this] { impl_->ioc.run(); });
    }
}

WsServer::~WsServer() { stop(); }

unsigned short WsServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WsServer::stop() {
    if (impl_->threads.empty()) return;
    impl_->ioc.stop();
    for (auto& t : impl_->threads) t.join();
    impl_->threads.clear();
}

} // namespace chirono
