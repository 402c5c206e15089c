#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace lcx {

/// One side of a line-delimited JSON conversation: each request line gets
/// exactly one response line.
class LineHandler {
public:
    virtual ~LineHandler() = default;
    virtual std::string handle_line(const std::string& line) = 0;
    /// True once the peer asked to end the session.
    virtual bool finished() const { return false; }
};

using HandlerFactory = std::function<std::unique_ptr<LineHandler>()>;

/// Reads lines from `in` until EOF or the handler finishes. Blank lines are skipped.
void serve_stream(std::istream& in, std::ostream& out, LineHandler& handler);

/// TCP listener; every accepted connection gets its own handler from the
/// factory and its own thread.
class TcpLineServer {
public:
    /// Binds 127.0.0.1:`port` (0 picks a free port).
    TcpLineServer(std::uint16_t port, HandlerFactory factory);
    ~TcpLineServer();

    TcpLineServer(const TcpLineServer&) = delete;
    TcpLineServer& operator=(const TcpLineServer&) = delete;

    std::uint16_t port() const { return port_; }

    /// Accept loop in a background thread.
    void start();
    /// Accept loop on the calling thread; returns after stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    HandlerFactory factory_;
    std::uint16_t port_ = 0;
    std::thread accept_thread_;
    std::atomic<bool> stopping_{false};
};

}  // namespace lcx
