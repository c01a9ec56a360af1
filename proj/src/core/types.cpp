#include "rcs/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IndexMismatch: return "IndexMismatch";
        case ErrorCode::UnknownStatus: return "UnknownStatus";
        case ErrorCode::Malformed: return "Malformed";
        case ErrorCode::UnknownCommand: return "UnknownCommand";
        case ErrorCode::ArgOutOfRange: return "ArgOutOfRange";
        case ErrorCode::Transport: return "Transport";
        case ErrorCode::ReplayExhausted: return "ReplayExhausted";
        case ErrorCode::PolicyUnknown: return "PolicyUnknown";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::OverlapError: return "OverlapError";
        case ErrorCode::InvalidCommand: return "InvalidCommand";
        case ErrorCode::ConnectionClosed: return "ConnectionClosed";
        case ErrorCode::TopicPayloadMismatch: return "TopicPayloadMismatch";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::Protocol: return "Protocol";
        case ErrorCode::CountError: return "CountError";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

UserRequest make_request(std::string text, std::string id) {
    if (trim(text).empty()) throw Error(ErrorCode::Malformed, "user request text is empty");
    return UserRequest{std::move(text), std::move(id)};
}

std::string_view status_token(Status s) {
    return s == Status::Continue ? "CONTINUE" : "FINISH";
}

Status parse_status(std::string_view token) {
    std::string norm(trim(token));
    std::transform(norm.begin(), norm.end(), norm.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (norm == "CONTINUE") return Status::Continue;
    if (norm == "FINISH") return Status::Finish;
    throw Error(ErrorCode::UnknownStatus, fmt::format("'{}'", token));
}

bool operator==(const CarForward& a, const CarForward& b) { return a.distance == b.distance; }
bool operator==(const CarBack& a, const CarBack& b) { return a.distance == b.distance; }
bool operator==(const CarLeft& a, const CarLeft& b) { return a.angle == b.angle; }
bool operator==(const CarRight& a, const CarRight& b) { return a.angle == b.angle; }
bool operator==(const CameraMove& a, const CameraMove& b) { return a.pitch == b.pitch; }
bool operator==(const Buzzer& a, const Buzzer& b) { return a.duration == b.duration; }

namespace {

struct CommandInfo {
    std::string_view name;
    std::string_view arg;
};

CommandInfo info(const Command& cmd) {
    struct Visitor {
        CommandInfo operator()(const CarForward&) const { return {"car_forward", "distance"}; }
        CommandInfo operator()(const CarBack&) const { return {"car_back", "distance"}; }
        CommandInfo operator()(const CarLeft&) const { return {"car_left", "angle"}; }
        CommandInfo operator()(const CarRight&) const { return {"car_right", "angle"}; }
        CommandInfo operator()(const CameraMove&) const { return {"camera_move", "pitch"}; }
        CommandInfo operator()(const Buzzer&) const { return {"buzzer", "duration"}; }
    };
    return std::visit(Visitor{}, cmd);
}

bool in_half_open(double v, double hi) { return std::isfinite(v) && v > 0.0 && v <= hi; }

}  // namespace

std::string_view command_name(const Command& cmd) { return info(cmd).name; }
std::string_view command_arg_name(const Command& cmd) { return info(cmd).arg; }

double command_arg(const Command& cmd) {
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CarForward> || std::is_same_v<T, CarBack>) {
                return c.distance;
            } else if constexpr (std::is_same_v<T, CarLeft> || std::is_same_v<T, CarRight>) {
                return c.angle;
            } else if constexpr (std::is_same_v<T, CameraMove>) {
                return c.pitch;
            } else {
                return c.duration;
            }
        },
        cmd);
}

bool command_valid(const Command& cmd) {
    const double v = command_arg(cmd);
    return std::visit(
        [v](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, CarForward> || std::is_same_v<T, CarBack>) {
                return in_half_open(v, limits::kMaxDistance);
            } else if constexpr (std::is_same_v<T, CarLeft> || std::is_same_v<T, CarRight>) {
                return in_half_open(v, limits::kMaxAngle);
            } else if constexpr (std::is_same_v<T, CameraMove>) {
                return std::isfinite(v) && v >= limits::kMinPitch && v <= limits::kMaxPitch;
            } else {
                return in_half_open(v, limits::kMaxDuration);
            }
        },
        cmd);
}

Command make_command(std::string_view name, double arg) {
    Command cmd;
    if (name == "car_forward") {
        cmd = CarForward{arg};
    } else if (name == "car_back") {
        cmd = CarBack{arg};
    } else if (name == "car_left") {
        cmd = CarLeft{arg};
    } else if (name == "car_right") {
        cmd = CarRight{arg};
    } else if (name == "camera_move") {
        cmd = CameraMove{arg};
    } else if (name == "buzzer") {
        cmd = Buzzer{arg};
    } else {
        throw Error(ErrorCode::UnknownCommand, fmt::format("'{}'", name));
    }
    if (!command_valid(cmd)) {
        throw Error(ErrorCode::ArgOutOfRange, fmt::format("{}({}={})", name, command_arg_name(cmd), arg));
    }
    return cmd;
}

std::string describe(const Command& cmd) {
    return fmt::format("{}({}={})", command_name(cmd), command_arg_name(cmd), command_arg(cmd));
}

namespace {

double tidy(double v, double resolution) { return std::abs(v) < resolution ? 0.0 : v; }

}  // namespace

std::string render_observation_text(const std::vector<VisibleObject>& items) {
    if (items.empty()) return "No objects in view.";
    std::string out;
    for (const auto& item : items) {
        out += fmt::format("- {} | color={} | shape={} | distance={:.2f} m | bearing={:+.1f} deg", item.label,
                           item.color, item.shape, item.distance, tidy(item.bearing, 0.05));
        if (item.text_on_object) out += fmt::format(" | text=\"{}\"", *item.text_on_object);
        if (item.face) out += fmt::format(" | face=\"{}\"", *item.face);
        out += '\n';
    }
    out.pop_back();
    return out;
}

Observation make_observation(std::vector<VisibleObject> items) {
    std::stable_sort(items.begin(), items.end(), [](const VisibleObject& a, const VisibleObject& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.label < b.label;
    });
    Observation obs;
    obs.free_text = render_observation_text(items);
    obs.items = std::move(items);
    return obs;
}

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Ok: return "Ok";
        case Outcome::Blocked: return "Blocked";
        case Outcome::Avoided: return "Avoided";
        case Outcome::Clamped: return "Clamped";
    }
    return "Ok";
}

Outcome parse_outcome(std::string_view name) {
    if (name == "Ok") return Outcome::Ok;
    if (name == "Blocked") return Outcome::Blocked;
    if (name == "Avoided") return Outcome::Avoided;
    if (name == "Clamped") return Outcome::Clamped;
    throw Error(ErrorCode::Malformed, fmt::format("unknown outcome '{}'", name));
}

GlobalPlan make_plan(std::vector<std::string> steps) {
    if (steps.empty()) throw Error(ErrorCode::Malformed, "global plan has no steps");
    for (const auto& s : steps) {
        if (trim(s).empty()) throw Error(ErrorCode::Malformed, "global plan has a blank step");
    }
    return GlobalPlan{std::move(steps)};
}

}  // namespace rcs
