#pragma once

#include "rcs/core/robot_link.hpp"
#include "rcs/sim/robot_sim.hpp"
#include "rcs/sim/world.hpp"

namespace rcs::sim {

// In-process robot: commands go straight to the simulator.
class SimLink final : public RobotLink {
public:
    explicit SimLink(WorldState world) : world_(std::move(world)) {}

    Snapshot observe() override { return {read_sensors(world_), render_camera(world_)}; }

    ExecResult execute(const Command& command) override {
        auto [next, result] = apply_command(world_, command);
        world_ = std::move(next);
        return result;
    }

    const WorldState& world() const { return world_; }

private:
    WorldState world_;
};

}  // namespace rcs::sim
