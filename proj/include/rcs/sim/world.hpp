#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcs/core/types.hpp"
#include "rcs/sim/geometry.hpp"

namespace rcs::sim {

// Sensor geometry and motion constants. None of these are measured values; a
// world file may override any of them.
struct SimParams {
    double footprint_radius = 0.10;
    double ultrasonic_max = 4.0;
    double avoid_threshold = 0.30;
    double integration_step = 0.05;
    double hfov = 62.0;
    double vfov = 49.0;
    double ir_range = 0.20;
    double ir_angle = 30.0;
    double camera_height = 0.12;
    double pitch_min = -30.0;
    double pitch_max = 60.0;

    bool operator==(const SimParams&) const = default;
};

enum class ObjectKind { Box, Wall, Person, Paper, Refrigerator, Marker };

std::string_view kind_name(ObjectKind k);

struct SimObject {
    std::string id;
    ObjectKind kind = ObjectKind::Box;
    Shape shape;
    std::string label;
    std::string color;
    std::optional<std::string> text_on_object;
    // Height band [lo, hi] holding the text; defaults to the whole object.
    std::optional<std::pair<double, double>> text_band;
    // People only: shown once the top 0.25 m of the body is in view.
    std::optional<std::string> face;
    double height = 0.5;

    bool operator==(const SimObject&) const = default;
};

struct RobotPose {
    double x = 0;
    double y = 0;
    double heading = 0;
    double camera_pitch = 0;

    Vec2 position() const { return {x, y}; }
    bool operator==(const RobotPose&) const = default;
};

struct WorldState {
    RobotPose robot;
    std::vector<SimObject> objects;
    std::vector<double> buzzer_events;
    SimParams params;
    // Simulated seconds since load; advanced by every command.
    double clock = 0;

    const SimObject* find(std::string_view id) const;
    bool operator==(const WorldState&) const = default;
};

// Throws SchemaError on a bad document and OverlapError when the robot starts
// inside an object.
WorldState load_world(const nlohmann::json& doc);
WorldState load_world_file(const std::filesystem::path& path);
nlohmann::json world_to_json(const WorldState& world);
std::string world_digest(const WorldState& world);

// True when the robot footprint at center cuts into any object.
bool footprint_overlaps(const WorldState& world, Vec2 center);

}  // namespace rcs::sim
