#pragma once

#include "chirono/session.hpp"

#include <memory>
#include <string>

namespace chirono {

/// "host:port", ":port" or "port". Throws Error(InvalidConfig).
std::pair<std::string, unsigned short> parse_listen(const std::string& addr);

/**
 * WebSocket transport for a SessionHub. Clients pick their role with the
 * query string (ws://host:port/?role=presenter|audience, default audience).
 * Runs its own I/O threads; the hub's engine loop runs elsewhere.
 */
class WsServer {
public:
    WsServer(SessionHub& hub, const std::string& listen, unsigned threads = 2);
    ~WsServer();
    WsServer(const WsServer&) = delete;
    WsServer& operator=(const WsServer&) = delete;

    /// Bound port (useful with port 0).
    [[nodiscard]] unsigned short port() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace chirono
