#pragma once

#include "rcs/core/types.hpp"

namespace rcs {

struct Snapshot {
    SensorData sensors;
    Observation observation;
};

// Connection from the orchestrator to a robot, simulated or remote.
class RobotLink {
public:
    virtual ~RobotLink() = default;
    // Latest sensor reading and camera frame.
    virtual Snapshot observe() = 0;
    // Dispatches one command and refreshes the snapshot returned by observe().
    virtual ExecResult execute(const Command& command) = 0;
};

}  // namespace rcs
