#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "rcs/core/memory.hpp"
#include "rcs/core/types.hpp"

// Canonical JSON forms of the core types. Field names match the struct members;
// commands are {"name": "car_forward", "args": {"distance": 0.5}}.
namespace rcs {

using Json = nlohmann::json;

void to_json(Json& j, const UserRequest& r);
void from_json(const Json& j, UserRequest& r);

void to_json(Json& j, const Status& s);
void from_json(const Json& j, Status& s);

Json command_to_json(const Command& cmd);
// Throws Malformed, UnknownCommand or ArgOutOfRange.
Command command_from_json(const Json& j);

void to_json(Json& j, const SensorData& s);
void from_json(const Json& j, SensorData& s);

void to_json(Json& j, const VisibleObject& v);
void from_json(const Json& j, VisibleObject& v);

void to_json(Json& j, const Observation& o);
void from_json(const Json& j, Observation& o);

void to_json(Json& j, const ExecResult& r);
void from_json(const Json& j, ExecResult& r);

void to_json(Json& j, const Round& r);
void from_json(const Json& j, Round& r);

void to_json(Json& j, const GlobalPlan& p);
void from_json(const Json& j, GlobalPlan& p);

Json memory_to_json(const MemoryLog& log);
MemoryLog memory_from_json(const Json& j);

// One-line canonical text for a value; used in trace files and on the wire.
std::string dump_line(const Json& j);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace rcs
