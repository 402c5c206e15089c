#include "lcx/line_server.hpp"

#include <boost/asio.hpp>
#include <istream>
#include <ostream>

#include "lcx/types.hpp"

namespace lcx {

namespace asio = boost::asio;
using asio::ip::tcp;

void serve_stream(std::istream& in, std::ostream& out, LineHandler& handler) {
    std::string line;
    while (!handler.finished() && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out << handler.handle_line(line) << '\n' << std::flush;
    }
}

struct TcpLineServer::Impl {
    asio::io_context io;
    tcp::acceptor acceptor{io};
    std::mutex mutex;
    std::vector<std::shared_ptr<tcp::socket>> sockets;
    std::vector<std::thread> workers;
};

namespace {

void serve_socket(std::shared_ptr<tcp::socket> socket, std::unique_ptr<LineHandler> handler) {
    asio::streambuf buffer;
    std::istream in(&buffer);
    boost::system::error_code ec;
    while (!handler->finished()) {
        asio::read_until(*socket, buffer, '\n', ec);
        if (ec) break;
        std::string line;
        std::getline(in, line);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string reply = handler->handle_line(line) + "\n";
        asio::write(*socket, asio::buffer(reply), ec);
        if (ec) break;
    }
    socket->shutdown(tcp::socket::shutdown_both, ec);
}

}  // namespace

TcpLineServer::TcpLineServer(std::uint16_t port, HandlerFactory factory)
    : impl_(std::make_unique<Impl>()), factory_(std::move(factory)) {
    try {
        const tcp::endpoint endpoint(asio::ip::address_v4::loopback(), port);
        impl_->acceptor.open(endpoint.protocol());
        impl_->acceptor.set_option(tcp::acceptor::reuse_address(true));
        impl_->acceptor.bind(endpoint);
        impl_->acceptor.listen();
        port_ = impl_->acceptor.local_endpoint().port();
    } catch (const boost::system::system_error& e) {
        throw Error(Errc::Io, std::string("cannot listen: ") + e.what());
    }
}

TcpLineServer::~TcpLineServer() { stop(); }

void TcpLineServer::start() {
    accept_thread_ = std::thread([this] { run(); });
}

void TcpLineServer::run() {
    while (!stopping_) {
        auto socket = std::make_shared<tcp::socket>(impl_->io);
        boost::system::error_code ec;
        impl_->acceptor.accept(*socket, ec);
        if (ec || stopping_) break;
        std::lock_guard lock(impl_->mutex);
        impl_->sockets.push_back(socket);
        impl_->workers.emplace_back(serve_socket, socket, factory_());
    }
}

void TcpLineServer::stop() {
    if (stopping_.exchange(true)) return;
    boost::system::error_code ec;
    // wake a blocked accept()
    impl_->acceptor.cancel(ec);
    {
        tcp::socket poke(impl_->io);
        poke.connect(tcp::endpoint(asio::ip::address_v4::loopback(), port_), ec);
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    impl_->acceptor.close(ec);
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(impl_->mutex);
        for (auto& s : impl_->sockets) s->shutdown(tcp::socket::shutdown_both, ec);
        workers.swap(impl_->workers);
    }
    for (auto& w : workers) w.join();
}

}  // namespace lcx
