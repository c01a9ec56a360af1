#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rcs/core/types.hpp"

namespace rcs::llm {

struct HostDecision {
    std::string observation_desc;
    std::string thoughts;
    GlobalPlan global_plan;
    std::string comment;

    bool operator==(const HostDecision&) const = default;
};

struct AppDecision {
    std::string observation_desc;
    std::string comment;
    std::optional<Command> command;
    Status status = Status::Continue;

    bool operator==(const AppDecision&) const = default;
};

// The JSON object between the first '{' and the last '}' of a completion.
// Throws Malformed if there is none or it does not parse.
nlohmann::json extract_object(std::string_view raw);

// Keys: observation, thoughts, plan (list of strings), comment.
HostDecision parse_host_decision(std::string_view raw);
// Keys: observation, comment, status, optional command {name, args}.
// CONTINUE without a command is Malformed.
AppDecision parse_app_decision(std::string_view raw);

nlohmann::json host_decision_to_json(const HostDecision& d);
nlohmann::json app_decision_to_json(const AppDecision& d);

}  // namespace rcs::llm
