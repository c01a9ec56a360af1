#pragma once

#include <atomic>
#include <chrono>
#include <string>

#include "rcs/bridge/connection.hpp"
#include "rcs/sim/world.hpp"

namespace rcs::bridge {

// Owns a simulated world and answers commands arriving on /carobo/cmd.
class RobotServer {
public:
    explicit RobotServer(sim::WorldState world) : world_(std::move(world)) {}

    // Publishes sensor then vision, then for each command: exec, sensor,
    // vision. Returns when the peer closes. A command that does not decode or
    // cannot be applied gets an error envelope, after which the connection is
    // closed.
    void serve(Connection& conn);

    const sim::WorldState& world() const { return world_; }

private:
    void publish_snapshot(Connection& conn);

    sim::WorldState world_;
};

// Accepts TCP connections one at a time until `stop` is set; every
// connection starts from a fresh copy of `world`.
void serve_robot(const sim::WorldState& world, const std::string& host, std::uint16_t port,
                 const std::atomic<bool>& stop, std::function<void(std::uint16_t)> on_listening = {});

}  // namespace rcs::bridge
