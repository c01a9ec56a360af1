#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rcs/agent/episode.hpp"
#include "rcs/bench/goal.hpp"
#include "rcs/sim/world.hpp"

namespace rcs::bench {

enum class Domain { ObjectDetection, CommandExecution, ObstacleNavigation, SituationAwareness };

inline constexpr Domain kDomains[] = {Domain::ObjectDetection, Domain::CommandExecution,
                                      Domain::ObstacleNavigation, Domain::SituationAwareness};

// "object_detection", ...
std::string_view domain_name(Domain d);
// "Object Detection", ...
std::string_view domain_title(Domain d);
Domain parse_domain(std::string_view s);

struct ScenarioSpec {
    std::string id;
    Domain domain = Domain::ObjectDetection;
    std::string request_text;
    std::filesystem::path world_file;
    Goal goal;
    agent::EpisodeLimits limits;
    // Loaded from world_file.
    sim::WorldState world;

    UserRequest request() const { return make_request(request_text, id); }
};

struct Benchmark {
    std::vector<ScenarioSpec> scenarios;

    // Throws Malformed for an unknown id.
    const ScenarioSpec& find(std::string_view id) const;
};

inline constexpr int kScenariosPerDomain = 5;

// Any number of scenarios. World paths resolve against the suite file's
// directory. Throws SchemaError (or the world loader's errors).
Benchmark load_scenarios(const std::filesystem::path& path);
// Also requires exactly five scenarios in each of the four domains; CountError otherwise.
Benchmark load_benchmark(const std::filesystem::path& path);
void check_counts(const Benchmark& b);

}  // namespace rcs::bench
