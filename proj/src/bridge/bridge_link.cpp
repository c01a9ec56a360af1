#include "rcs/bridge/bridge_link.hpp"

#include <charconv>
#include <future>

#include <fmt/format.h>

#include "rcs/bridge/robot_server.hpp"
#include "rcs/error.hpp"

namespace rcs::bridge {

Transport Transport::parse(std::string_view endpoint) {
    if (endpoint == "local:" || endpoint == "local") return {};
    constexpr std::string_view prefix = "tcp:";
    if (endpoint.substr(0, prefix.size()) == prefix) {
        const auto rest = endpoint.substr(prefix.size());
        const auto colon = rest.rfind(':');
        if (colon != std::string_view::npos && colon > 0) {
            const auto port_text = rest.substr(colon + 1);
            unsigned port = 0;
            auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
            if (ec == std::errc() && p == port_text.data() + port_text.size() && port <= 65535 &&
                !port_text.empty())
                return {Kind::Tcp, std::string(rest.substr(0, colon)), static_cast<std::uint16_t>(port)};
        }
    }
    throw Error(ErrorCode::Malformed, fmt::format("bad transport '{}', want local: or tcp:HOST:PORT", endpoint));
}

std::string Transport::to_string() const {
    return kind == Kind::Local ? "local:" : fmt::format("tcp:{}:{}", host, port);
}

Envelope BridgeLink::await(std::string_view topic) {
    try {
        return conn_.next_message(topic, timeout_);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ConnectionClosed && e.code() != ErrorCode::Protocol) throw;
        if (auto err = conn_.try_next(topics::kError))
            throw Error(ErrorCode::Protocol, fmt::format("robot: {}", err->payload.value("message", "")));
        throw;
    }
}

Snapshot BridgeLink::read_snapshot() {
    Snapshot s;
    s.sensors = as_sensor(await(topics::kSensor));
    s.observation = as_observation(await(topics::kVision));
    return s;
}

Snapshot BridgeLink::observe() {
    if (!latest_) latest_ = read_snapshot();
    return *latest_;
}

ExecResult BridgeLink::execute(const Command& command) {
    if (!latest_) latest_ = read_snapshot();
    conn_.publish(topics::kCmd, command);
    ExecResult r = as_exec(await(topics::kExec));
    latest_ = read_snapshot();
    return r;
}

std::unique_ptr<RobotSession> RobotSession::spawn(sim::WorldState world, const Transport& transport) {
    std::unique_ptr<RobotSession> s(new RobotSession());
    std::unique_ptr<LineStream> client_end;
    std::unique_ptr<LineStream> server_end;
    if (transport.kind == Transport::Kind::Local) {
        std::tie(client_end, server_end) = make_pipe_pair();
    } else {
        s->listener_ = std::make_unique<TcpListener>(transport.host, transport.port);
        auto accepted = std::async(std::launch::async, [l = s->listener_.get()] { return l->accept(); });
        client_end = TcpStream::connect(transport.host, s->listener_->port());
        server_end = accepted.get();
    }
    s->server_conn_ = std::make_unique<Connection>(std::move(server_end));
    s->server_thread_ = std::thread([self = s.get(), world = std::move(world)]() mutable {
        try {
            RobotServer server(std::move(world));
            server.serve(*self->server_conn_);
            self->final_world_ = server.world();
        } catch (...) {
            self->server_error_ = std::current_exception();
        }
    });
    s->conn_ = std::make_unique<Connection>(std::move(client_end));
    s->link_ = std::make_unique<BridgeLink>(*s->conn_);
    return s;
}

std::unique_ptr<RobotSession> RobotSession::connect(const Transport& transport) {
    if (transport.kind != Transport::Kind::Tcp)
        throw Error(ErrorCode::Malformed, "connect needs a tcp:HOST:PORT transport");
    std::unique_ptr<RobotSession> s(new RobotSession());
    s->conn_ = std::make_unique<Connection>(TcpStream::connect(transport.host, transport.port));
    s->link_ = std::make_unique<BridgeLink>(*s->conn_);
    return s;
}

std::optional<sim::WorldState> RobotSession::close() {
    if (conn_) conn_->close();
    if (server_thread_.joinable()) server_thread_.join();
    if (server_error_) std::rethrow_exception(std::exchange(server_error_, nullptr));
    return final_world_;
}

RobotSession::~RobotSession() {
    try {
        close();
    } catch (...) {
    }
}

}  // namespace rcs::bridge
