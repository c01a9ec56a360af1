#pragma once

#include <utility>

#include "rcs/core/types.hpp"
#include "rcs/sim/world.hpp"

namespace rcs::sim {

// Distance along the ray to the nearest object, or max_range when nothing is
// hit. max_range may be infinity.
double raycast(const WorldState& world, Vec2 origin, double direction_deg, double max_range);

SensorData read_sensors(const WorldState& world);

// Pure: the input world is untouched. Throws InvalidCommand when the command
// arguments are outside their ranges.
std::pair<WorldState, ExecResult> apply_command(const WorldState& world, const Command& command);

Observation render_camera(const WorldState& world);

}  // namespace rcs::sim
