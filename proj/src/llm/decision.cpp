#include "rcs/llm/decision.hpp"

#include <fmt/format.h>

#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"

namespace rcs::llm {

using nlohmann::json;

namespace {

std::string text_field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::Malformed, fmt::format("missing key '{}'", key));
    if (!it->is_string()) throw Error(ErrorCode::Malformed, fmt::format("'{}' must be a string", key));
    return it->get<std::string>();
}

}  // namespace

json extract_object(std::string_view raw) {
    const auto open = raw.find('{');
    const auto close = raw.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw Error(ErrorCode::Malformed, "no structured object in completion");
    }
    json j = json::parse(raw.substr(open, close - open + 1), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::Malformed, "completion object does not parse");
    return j;
}

HostDecision parse_host_decision(std::string_view raw) {
    const json j = extract_object(raw);
    HostDecision d;
    d.observation_desc = text_field(j, "observation");
    d.thoughts = text_field(j, "thoughts");
    d.comment = text_field(j, "comment");
    auto plan = j.find("plan");
    if (plan == j.end()) throw Error(ErrorCode::Malformed, "missing key 'plan'");
    if (!plan->is_array()) throw Error(ErrorCode::Malformed, "'plan' must be a list");
    std::vector<std::string> steps;
    for (const auto& s : *plan) {
        if (!s.is_string()) throw Error(ErrorCode::Malformed, "plan steps must be strings");
        steps.push_back(s.get<std::string>());
    }
    d.global_plan = make_plan(std::move(steps));
    return d;
}

AppDecision parse_app_decision(std::string_view raw) {
    const json j = extract_object(raw);
    AppDecision d;
    d.observation_desc = text_field(j, "observation");
    d.comment = text_field(j, "comment");
    d.status = parse_status(text_field(j, "status"));
    if (auto cmd = j.find("command"); cmd != j.end() && !cmd->is_null()) {
        d.command = command_from_json(*cmd);
    }
    if (d.status == Status::Continue && !d.command) {
        throw Error(ErrorCode::Malformed, "CONTINUE requires a command");
    }
    return d;
}

json host_decision_to_json(const HostDecision& d) {
    return {{"observation", d.observation_desc},
            {"thoughts", d.thoughts},
            {"plan", d.global_plan.steps},
            {"comment", d.comment}};
}

json app_decision_to_json(const AppDecision& d) {
    json j{{"observation", d.observation_desc}, {"comment", d.comment}};
    if (d.command) j["command"] = command_to_json(*d.command);
    j["status"] = std::string(status_token(d.status));
    return j;
}

}  // namespace rcs::llm
