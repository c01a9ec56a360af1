#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "rcs/core/types.hpp"

namespace rcs::bridge {

namespace topics {
inline constexpr std::string_view kCmd = "/carobo/cmd";
inline constexpr std::string_view kVision = "/carobo/vision";
inline constexpr std::string_view kSensor = "/carobo/sensor";
inline constexpr std::string_view kExec = "/carobo/exec";
// Server-side failures; payload is {"code": ..., "message": ...}.
inline constexpr std::string_view kError = "/carobo/error";
}  // namespace topics

bool known_topic(std::string_view topic);

using Message = std::variant<Command, Observation, SensorData, ExecResult>;

std::string_view topic_for(const Message& msg);
nlohmann::json message_to_json(const Message& msg);

struct Envelope {
    std::string topic;
    std::uint64_t seq = 0;
    std::int64_t timestamp_ms = 0;
    nlohmann::json payload;

    bool operator==(const Envelope&) const = default;
};

// Throws TopicPayloadMismatch when the payload does not decode as the topic's type.
void check_payload(std::string_view topic, const nlohmann::json& payload);

// topic|seq|timestamp|payload
std::string encode(const Envelope& env);
// Throws Protocol on bad framing or an unknown topic. The payload is not type-checked.
Envelope decode(std::string_view line);

Command as_command(const Envelope& env);
Observation as_observation(const Envelope& env);
SensorData as_sensor(const Envelope& env);
ExecResult as_exec(const Envelope& env);

}  // namespace rcs::bridge
