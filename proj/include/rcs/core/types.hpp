#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rcs {

struct UserRequest {
    std::string text;
    std::string id;
};

// Throws Malformed when the text is blank.
UserRequest make_request(std::string text, std::string id);

enum class Status { Continue, Finish };

std::string_view status_token(Status s);
// Trims and uppercases before matching; throws UnknownStatus otherwise.
Status parse_status(std::string_view token);

// Control functions. Distances in meters, angles in degrees, pitch absolute.
struct CarForward { double distance = 0; };
struct CarBack { double distance = 0; };
struct CarLeft { double angle = 0; };
struct CarRight { double angle = 0; };
struct CameraMove { double pitch = 0; };
struct Buzzer { double duration = 0; };

using Command = std::variant<CarForward, CarBack, CarLeft, CarRight, CameraMove, Buzzer>;

namespace limits {
inline constexpr double kMaxDistance = 10.0;
inline constexpr double kMaxAngle = 360.0;
inline constexpr double kMinPitch = -30.0;
inline constexpr double kMaxPitch = 60.0;
inline constexpr double kMaxDuration = 10.0;
}  // namespace limits

// Wire name, e.g. "car_forward".
std::string_view command_name(const Command& cmd);
// Argument key and value, e.g. {"distance", 0.5}.
std::string_view command_arg_name(const Command& cmd);
double command_arg(const Command& cmd);
bool command_valid(const Command& cmd);
// Throws UnknownCommand for an unknown name and ArgOutOfRange for a bad value.
Command make_command(std::string_view name, double arg);
// "car_forward(distance=0.5)"
std::string describe(const Command& cmd);

bool operator==(const CarForward& a, const CarForward& b);
bool operator==(const CarBack& a, const CarBack& b);
bool operator==(const CarLeft& a, const CarLeft& b);
bool operator==(const CarRight& a, const CarRight& b);
bool operator==(const CameraMove& a, const CameraMove& b);
bool operator==(const Buzzer& a, const Buzzer& b);

struct SensorData {
    double ultrasonic_clearance = 0;
    bool ir_left = false;
    bool ir_right = false;

    bool operator==(const SensorData&) const = default;
};

struct VisibleObject {
    std::string label;
    std::string color;
    std::string shape;
    std::optional<std::string> text_on_object;
    // Only populated for people whose face band is inside the vertical field of view.
    std::optional<std::string> face;
    double distance = 0;
    double bearing = 0;

    bool operator==(const VisibleObject&) const = default;
};

struct Observation {
    std::vector<VisibleObject> items;
    std::string free_text;
    std::optional<std::vector<std::uint8_t>> image_attachment;

    bool operator==(const Observation&) const = default;
};

// Deterministic text rendering of the visible items, nearest first.
std::string render_observation_text(const std::vector<VisibleObject>& items);
Observation make_observation(std::vector<VisibleObject> items);

enum class Outcome { Ok, Blocked, Avoided, Clamped };

std::string_view outcome_name(Outcome o);
Outcome parse_outcome(std::string_view name);

struct ExecResult {
    Command command_echo;
    Outcome outcome = Outcome::Ok;
    double distance_travelled = 0;
    double heading_change = 0;
    SensorData sensor_after;

    bool operator==(const ExecResult&) const = default;
};

struct Round {
    int index = 0;
    Observation observation;
    std::optional<std::string> thoughts;
    std::string comment;
    std::optional<Command> action;
    std::optional<ExecResult> exec_result;
    Status status = Status::Continue;

    bool operator==(const Round&) const = default;
};

struct GlobalPlan {
    std::vector<std::string> steps;

    bool operator==(const GlobalPlan&) const = default;
};

// Throws Malformed on an empty plan or a blank step.
GlobalPlan make_plan(std::vector<std::string> steps);

}  // namespace rcs
