#include "rcs/bridge/envelope.hpp"

#include <charconv>

#include <fmt/format.h>

#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"

namespace rcs::bridge {

bool known_topic(std::string_view t) {
    return t == topics::kCmd || t == topics::kVision || t == topics::kSensor || t == topics::kExec ||
           t == topics::kError;
}

std::string_view topic_for(const Message& msg) {
    struct V {
        std::string_view operator()(const Command&) const { return topics::kCmd; }
        std::string_view operator()(const Observation&) const { return topics::kVision; }
        std::string_view operator()(const SensorData&) const { return topics::kSensor; }
        std::string_view operator()(const ExecResult&) const { return topics::kExec; }
    };
    return std::visit(V{}, msg);
}

nlohmann::json message_to_json(const Message& msg) {
    struct V {
        Json operator()(const Command& c) const { return command_to_json(c); }
        Json operator()(const Observation& o) const { return o; }
        Json operator()(const SensorData& s) const { return s; }
        Json operator()(const ExecResult& r) const { return r; }
    };
    return std::visit(V{}, msg);
}

void check_payload(std::string_view topic, const nlohmann::json& payload) {
    try {
        if (topic == topics::kCmd) {
            (void)command_from_json(payload);
        } else if (topic == topics::kVision) {
            (void)payload.get<Observation>();
        } else if (topic == topics::kSensor) {
            (void)payload.get<SensorData>();
        } else if (topic == topics::kExec) {
            (void)payload.get<ExecResult>();
        } else if (topic == topics::kError) {
            if (!payload.is_object() || !payload.contains("message"))
                throw Error(ErrorCode::Malformed, "error payload needs a message");
        } else {
            throw Error(ErrorCode::TopicPayloadMismatch, fmt::format("unknown topic '{}'", topic));
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TopicPayloadMismatch) throw;
        throw Error(ErrorCode::TopicPayloadMismatch, fmt::format("{}: {}", topic, e.what()));
    } catch (const std::exception& e) {
        throw Error(ErrorCode::TopicPayloadMismatch, fmt::format("{}: {}", topic, e.what()));
    }
}

std::string encode(const Envelope& env) {
    return fmt::format("{}|{}|{}|{}", env.topic, env.seq, env.timestamp_ms, dump_line(env.payload));
}

namespace {

template <typename T>
T parse_int(std::string_view s, std::string_view what) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::Protocol, fmt::format("bad {} '{}'", what, s));
    return v;
}

}  // namespace

Envelope decode(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view parts[3];
    for (auto& part : parts) {
        const auto bar = line.find('|');
        if (bar == std::string_view::npos) throw Error(ErrorCode::Protocol, "envelope needs 4 fields");
        part = line.substr(0, bar);
        line.remove_prefix(bar + 1);
    }
    Envelope env;
    env.topic = std::string(parts[0]);
    if (!known_topic(env.topic)) throw Error(ErrorCode::Protocol, fmt::format("unknown topic '{}'", env.topic));
    env.seq = parse_int<std::uint64_t>(parts[1], "seq");
    env.timestamp_ms = parse_int<std::int64_t>(parts[2], "timestamp");
    try {
        env.payload = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Protocol, fmt::format("payload: {}", e.what()));
    }
    return env;
}

namespace {

template <typename T>
T typed(const Envelope& env, std::string_view topic) {
    if (env.topic != topic)
        throw Error(ErrorCode::TopicPayloadMismatch, fmt::format("expected {}, got {}", topic, env.topic));
    check_payload(topic, env.payload);
    return env.payload.get<T>();
}

}  // namespace

Command as_command(const Envelope& env) {
    check_payload(topics::kCmd, env.payload);
    if (env.topic != topics::kCmd)
        throw Error(ErrorCode::TopicPayloadMismatch, fmt::format("expected {}, got {}", topics::kCmd, env.topic));
    return command_from_json(env.payload);
}
Observation as_observation(const Envelope& env) { return typed<Observation>(env, topics::kVision); }
SensorData as_sensor(const Envelope& env) { return typed<SensorData>(env, topics::kSensor); }
ExecResult as_exec(const Envelope& env) { return typed<ExecResult>(env, topics::kExec); }

}  // namespace rcs::bridge
