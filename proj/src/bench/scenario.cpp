#include "rcs/bench/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs::bench {

using nlohmann::json;

std::string_view domain_name(Domain d) {
    switch (d) {
        case Domain::ObjectDetection: return "object_detection";
        case Domain::CommandExecution: return "command_execution";
        case Domain::ObstacleNavigation: return "obstacle_navigation";
        case Domain::SituationAwareness: return "situation_awareness";
    }
    return "object_detection";
}

std::string_view domain_title(Domain d) {
    switch (d) {
        case Domain::ObjectDetection: return "Object Detection";
        case Domain::CommandExecution: return "Command Execution";
        case Domain::ObstacleNavigation: return "Obstacle Navigation";
        case Domain::SituationAwareness: return "Situation Awareness";
    }
    return "Object Detection";
}

Domain parse_domain(std::string_view s) {
    for (Domain d : kDomains)
        if (domain_name(d) == s) return d;
    throw Error(ErrorCode::SchemaError, fmt::format("unknown domain '{}'", s));
}

const ScenarioSpec& Benchmark::find(std::string_view id) const {
    for (const auto& s : scenarios)
        if (s.id == id) return s;
    throw Error(ErrorCode::Malformed, fmt::format("no scenario '{}'", id));
}

namespace {

ScenarioSpec parse_scenario(const json& j, const std::filesystem::path& base) {
    const auto field = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw Error(ErrorCode::SchemaError, fmt::format("scenario missing '{}'", key));
        return j.at(key);
    };
    ScenarioSpec s;
    try {
        s.id = field("id").get<std::string>();
        s.domain = parse_domain(field("domain").get<std::string>());
        s.request_text = field("request_text").get<std::string>();
        s.world_file = field("world").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, e.what());
    }
    if (s.id.empty()) throw Error(ErrorCode::SchemaError, "scenario id is empty");
    if (s.world_file.is_relative()) s.world_file = base / s.world_file;
    s.goal = goal_from_json(field("goal"));
    if (j.contains("limits")) {
        const auto& l = j.at("limits");
        if (!l.is_object()) throw Error(ErrorCode::SchemaError, "limits must be an object");
        s.limits.max_steps = l.value("max_steps", s.limits.max_steps);
        s.limits.max_rounds = l.value("max_rounds", s.limits.max_steps + 5);
        try {
            s.limits.validate();
        } catch (const Error& e) {
            throw Error(ErrorCode::SchemaError, fmt::format("{}: {}", s.id, e.what()));
        }
    }
    s.world = sim::load_world_file(s.world_file);
    check_goal(s.goal, s.world);
    return s;
}

}  // namespace

Benchmark load_scenarios(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open {}", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, fmt::format("{}: {}", path.string(), e.what()));
    }
    const json& list = doc.is_object() && doc.contains("scenarios") ? doc.at("scenarios") : doc;
    if (!list.is_array()) throw Error(ErrorCode::SchemaError, "suite needs a 'scenarios' list");
    Benchmark b;
    std::set<std::string> ids;
    for (const auto& j : list) {
        if (!j.is_object()) throw Error(ErrorCode::SchemaError, "scenario must be an object");
        b.scenarios.push_back(parse_scenario(j, path.parent_path()));
        if (!ids.insert(b.scenarios.back().id).second)
            throw Error(ErrorCode::SchemaError, fmt::format("duplicate scenario id '{}'", b.scenarios.back().id));
    }
    return b;
}

void check_counts(const Benchmark& b) {
    for (Domain d : kDomains) {
        const auto n = std::count_if(b.scenarios.begin(), b.scenarios.end(),
                                     [&](const auto& s) { return s.domain == d; });
        if (n != kScenariosPerDomain)
            throw Error(ErrorCode::CountError,
                        fmt::format("{} has {} scenarios, expected {}", domain_name(d), n, kScenariosPerDomain));
    }
}

Benchmark load_benchmark(const std::filesystem::path& path) {
    Benchmark b = load_scenarios(path);
    check_counts(b);
    return b;
}

}  // namespace rcs::bench
