#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include "rcs/bridge/connection.hpp"
#include "rcs/bridge/line_stream.hpp"
#include "rcs/core/robot_link.hpp"
#include "rcs/sim/world.hpp"

namespace rcs::bridge {

struct Transport {
    enum class Kind { Local, Tcp };
    Kind kind = Kind::Local;
    std::string host;
    std::uint16_t port = 0;

    // "local:" or "tcp:HOST:PORT". Throws Malformed otherwise.
    static Transport parse(std::string_view endpoint);
    std::string to_string() const;
};

// RobotLink that talks to a RobotServer through a Connection.
class BridgeLink final : public RobotLink {
public:
    explicit BridgeLink(Connection& conn, std::chrono::milliseconds timeout = std::chrono::seconds(10))
        : conn_(conn), timeout_(timeout) {}

    // The latest sensor + vision pair; waits for the handshake on first use.
    Snapshot observe() override;
    // Publishes on /carobo/cmd and waits for exec, sensor, vision.
    ExecResult execute(const Command& command) override;

private:
    Envelope await(std::string_view topic);
    Snapshot read_snapshot();

    Connection& conn_;
    std::chrono::milliseconds timeout_;
    std::optional<Snapshot> latest_;
};

// A BridgeLink plus, unless connecting to a remote server, an in-process
// RobotServer on the other end of the transport.
class RobotSession {
public:
    // Serves `world` locally over the chosen transport. For tcp the server
    // binds HOST:PORT (port 0 picks a free one) on a background thread.
    static std::unique_ptr<RobotSession> spawn(sim::WorldState world, const Transport& transport);
    // Connects to an already running `serve` process.
    static std::unique_ptr<RobotSession> connect(const Transport& transport);

    ~RobotSession();
    RobotSession(const RobotSession&) = delete;
    RobotSession& operator=(const RobotSession&) = delete;

    RobotLink& link() { return *link_; }
    // Closes the connection and returns the server's final world when it is local.
    std::optional<sim::WorldState> close();

private:
    RobotSession() = default;

    std::unique_ptr<Connection> conn_;
    std::unique_ptr<BridgeLink> link_;
    std::unique_ptr<Connection> server_conn_;
    std::unique_ptr<TcpListener> listener_;
    std::thread server_thread_;
    std::optional<sim::WorldState> final_world_;
    std::exception_ptr server_error_;
};

}  // namespace rcs::bridge
