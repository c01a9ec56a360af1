#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rcs/agent/episode.hpp"
#include "rcs/bench/report.hpp"
#include "rcs/bench/scenario.hpp"
#include "rcs/bridge/bridge_link.hpp"
#include "rcs/llm/backend.hpp"

namespace rcs::bench {

// Fresh backend per scenario.
using BackendFactory = std::function<std::unique_ptr<llm::Backend>(const ScenarioSpec&)>;

struct RunOptions {
    // nullopt drives the simulator directly without the bridge.
    std::optional<bridge::Transport> transport = bridge::Transport{};
    agent::EpisodeOptions episode;
};

struct ScenarioRun {
    ReportRow row;
    agent::EpisodeResult result;
    std::optional<sim::WorldState> final_world;
    // Set when the scenario aborted with an error outside the backend.
    std::optional<std::string> error;
};

// Runs one episode and judges it. Errors from the backend factory or the
// robot link are reported as Failure(BackendError), never thrown.
ScenarioRun run_scenario(const ScenarioSpec& spec, const BackendFactory& factory, const agent::Agents& agents,
                         const RunOptions& options, std::ostream* trace = nullptr);

struct SuiteOptions {
    std::string label = "backend";
    RunOptions run;
    // One <id>.trace file per scenario when set.
    std::optional<std::filesystem::path> trace_dir;
};

struct SuiteRun {
    Report report;
    std::vector<ScenarioRun> runs;
};

SuiteRun run_suite(const Benchmark& benchmark, const BackendFactory& factory, const agent::Agents& agents,
                   const SuiteOptions& options);

// Factories for the bundled backends.
BackendFactory scripted_factory(const std::string& policy_id);
// Reads <dir>/<scenario id>.trace.
BackendFactory replay_factory(const std::filesystem::path& dir);
BackendFactory config_factory(const llm::BackendConfig& cfg);

// Bundled data (suite, worlds, templates, replay traces); RCS_DATA_DIR overrides.
std::filesystem::path default_data_dir();

}  // namespace rcs::bench
