#include "rcs/core/serialize.hpp"

#include <array>

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs {

namespace {

const Json& require(const Json& j, const char* key) {
    if (!j.is_object()) throw Error(ErrorCode::Malformed, fmt::format("expected an object holding '{}'", key));
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::Malformed, fmt::format("missing key '{}'", key));
    return *it;
}

double require_number(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_number()) throw Error(ErrorCode::Malformed, fmt::format("'{}' must be a number", key));
    return v.get<double>();
}

std::string require_string(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_string()) throw Error(ErrorCode::Malformed, fmt::format("'{}' must be a string", key));
    return v.get<std::string>();
}

bool require_bool(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_boolean()) throw Error(ErrorCode::Malformed, fmt::format("'{}' must be a boolean", key));
    return v.get<bool>();
}

std::optional<std::string> optional_string(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw Error(ErrorCode::Malformed, fmt::format("'{}' must be a string", key));
    return it->get<std::string>();
}

}  // namespace

void to_json(Json& j, const UserRequest& r) { j = Json{{"text", r.text}, {"id", r.id}}; }

void from_json(const Json& j, UserRequest& r) {
    r = make_request(require_string(j, "text"), require_string(j, "id"));
}

void to_json(Json& j, const Status& s) { j = std::string(status_token(s)); }

void from_json(const Json& j, Status& s) {
    if (!j.is_string()) throw Error(ErrorCode::Malformed, "status must be a string");
    s = parse_status(j.get<std::string>());
}

Json command_to_json(const Command& cmd) {
    return Json{{"name", std::string(command_name(cmd))},
                {"args", Json{{std::string(command_arg_name(cmd)), command_arg(cmd)}}}};
}

Command command_from_json(const Json& j) {
    const std::string name = require_string(j, "name");
    // Resolve the name first so an unknown command wins over missing args.
    const Command probe = [&] {
        try {
            return make_command(name, 1.0);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::UnknownCommand) throw;
            return Command{CarForward{1.0}};
        }
    }();
    const std::string arg_name(command_arg_name(probe));
    const Json& args = require(j, "args");
    return make_command(name, require_number(args, arg_name.c_str()));
}

void to_json(Json& j, const SensorData& s) {
    j = Json{{"ultrasonic_clearance", s.ultrasonic_clearance}, {"ir_left", s.ir_left}, {"ir_right", s.ir_right}};
}

void from_json(const Json& j, SensorData& s) {
    s.ultrasonic_clearance = require_number(j, "ultrasonic_clearance");
    s.ir_left = require_bool(j, "ir_left");
    s.ir_right = require_bool(j, "ir_right");
}

void to_json(Json& j, const VisibleObject& v) {
    j = Json{{"label", v.label}, {"color", v.color}, {"shape", v.shape}};
    if (v.text_on_object) j["text_on_object"] = *v.text_on_object;
    if (v.face) j["face"] = *v.face;
    j["distance"] = v.distance;
    j["bearing"] = v.bearing;
}

void from_json(const Json& j, VisibleObject& v) {
    v.label = require_string(j, "label");
    v.color = require_string(j, "color");
    v.shape = require_string(j, "shape");
    v.text_on_object = optional_string(j, "text_on_object");
    v.face = optional_string(j, "face");
    v.distance = require_number(j, "distance");
    v.bearing = require_number(j, "bearing");
}

void to_json(Json& j, const Observation& o) {
    j = Json{{"items", o.items}, {"free_text", o.free_text}};
    if (o.image_attachment) j["image_attachment"] = base64_encode(*o.image_attachment);
}

void from_json(const Json& j, Observation& o) {
    const Json& items = require(j, "items");
    if (!items.is_array()) throw Error(ErrorCode::Malformed, "'items' must be an array");
    o.items = items.get<std::vector<VisibleObject>>();
    o.free_text = require_string(j, "free_text");
    if (auto img = optional_string(j, "image_attachment")) {
        o.image_attachment = base64_decode(*img);
    } else {
        o.image_attachment.reset();
    }
}

void to_json(Json& j, const ExecResult& r) {
    j = Json{{"command_echo", command_to_json(r.command_echo)},
             {"outcome", std::string(outcome_name(r.outcome))},
             {"distance_travelled", r.distance_travelled},
             {"heading_change", r.heading_change},
             {"sensor_after", r.sensor_after}};
}

void from_json(const Json& j, ExecResult& r) {
    r.command_echo = command_from_json(require(j, "command_echo"));
    r.outcome = parse_outcome(require_string(j, "outcome"));
    r.distance_travelled = require_number(j, "distance_travelled");
    r.heading_change = require_number(j, "heading_change");
    r.sensor_after = require(j, "sensor_after").get<SensorData>();
}

void to_json(Json& j, const Round& r) {
    j = Json{{"index", r.index}, {"observation", r.observation}};
    if (r.thoughts) j["thoughts"] = *r.thoughts;
    j["comment"] = r.comment;
    if (r.action) j["action"] = command_to_json(*r.action);
    if (r.exec_result) j["exec_result"] = *r.exec_result;
    j["status"] = r.status;
}

void from_json(const Json& j, Round& r) {
    const Json& idx = require(j, "index");
    if (!idx.is_number_integer()) throw Error(ErrorCode::Malformed, "'index' must be an integer");
    r.index = idx.get<int>();
    r.observation = require(j, "observation").get<Observation>();
    r.thoughts = optional_string(j, "thoughts");
    r.comment = require_string(j, "comment");
    r.action.reset();
    r.exec_result.reset();
    if (auto it = j.find("action"); it != j.end() && !it->is_null()) r.action = command_from_json(*it);
    if (auto it = j.find("exec_result"); it != j.end() && !it->is_null()) r.exec_result = it->get<ExecResult>();
    r.status = require(j, "status").get<Status>();
}

void to_json(Json& j, const GlobalPlan& p) { j = Json{{"steps", p.steps}}; }

void from_json(const Json& j, GlobalPlan& p) {
    const Json& steps = require(j, "steps");
    if (!steps.is_array()) throw Error(ErrorCode::Malformed, "'steps' must be an array");
    std::vector<std::string> out;
    for (const auto& s : steps) {
        if (!s.is_string()) throw Error(ErrorCode::Malformed, "plan steps must be strings");
        out.push_back(s.get<std::string>());
    }
    p = make_plan(std::move(out));
}

Json memory_to_json(const MemoryLog& log) {
    Json rounds = Json::array();
    for (const auto& r : log.rounds()) rounds.push_back(r);
    return Json{{"rounds", rounds}};
}

MemoryLog memory_from_json(const Json& j) {
    MemoryLog log;
    const Json& rounds = require(j, "rounds");
    if (!rounds.is_array()) throw Error(ErrorCode::Malformed, "'rounds' must be an array");
    for (const auto& r : rounds) log = log.append(r.get<Round>());
    return log;
}

std::string dump_line(const Json& j) {
    return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

namespace {
constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += kAlphabet[v & 63];
    }
    if (const std::size_t rest = bytes.size() - i; rest > 0) {
        std::uint32_t v = bytes[i] << 16;
        if (rest == 2) v |= bytes[i + 1] << 8;
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
    std::array<int, 256> table{};
    table.fill(-1);
    for (std::size_t i = 0; i < kAlphabet.size(); ++i) table[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int>(i);
    std::vector<std::uint8_t> out;
    std::uint32_t acc = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=') break;
        const int v = table[static_cast<unsigned char>(c)];
        if (v < 0) throw Error(ErrorCode::Malformed, "invalid base64");
        acc = (acc << 6) | static_cast<std::uint32_t>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
        }
    }
    return out;
}

}  // namespace rcs
