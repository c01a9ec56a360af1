#include "rcs/bench/suite_runner.hpp"

#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "rcs/error.hpp"
#include "rcs/sim/sim_link.hpp"

namespace rcs::bench {

ScenarioRun run_scenario(const ScenarioSpec& spec, const BackendFactory& factory, const agent::Agents& agents,
                         const RunOptions& options, std::ostream* trace) {
    ScenarioRun run;
    run.row.id = spec.id;
    run.row.domain = spec.domain;
    run.row.request_text = spec.request_text;
    run.result.request_id = spec.id;

    std::optional<agent::TraceWriter> writer;
    if (trace) {
        writer.emplace(*trace);
        writer->header(spec.request(), spec.limits, sim::world_to_json(spec.world));
    }
    try {
        auto backend = factory(spec);
        if (options.transport) {
            auto session = bridge::RobotSession::spawn(spec.world, *options.transport);
            run.result = agent::run_episode(spec.request(), session->link(), *backend, *backend, spec.limits, agents,
                                            options.episode, writer ? &*writer : nullptr);
            run.final_world = session->close();
        } else {
            sim::SimLink link(spec.world);
            run.result = agent::run_episode(spec.request(), link, *backend, *backend, spec.limits, agents,
                                            options.episode, writer ? &*writer : nullptr);
            run.final_world = link.world();
        }
    } catch (const Error& e) {
        run.error = e.what();
        run.result.verdict = agent::Verdict::Failure;
        run.result.failure_reason = agent::FailureReason::BackendError;
        run.result.finished = false;
        if (writer) writer->record({{"record", "error"}, {"message", e.what()}});
    }

    run.row.steps = run.result.steps;
    if (run.final_world && !run.error) {
        run.row.judgement = judge(run.result, spec.goal, *run.final_world);
    } else {
        run.row.judgement = {agent::Verdict::Failure, agent::FailureReason::BackendError};
    }
    if (writer) {
        writer->record({{"record", "verdict"},
                        {"verdict", std::string(agent::verdict_name(run.row.judgement.verdict))},
                        {"failure_reason", run.row.judgement.reason
                                               ? nlohmann::json(std::string(
                                                     agent::failure_reason_name(*run.row.judgement.reason)))
                                               : nlohmann::json()},
                        {"steps", run.row.steps}});
    }
    return run;
}

SuiteRun run_suite(const Benchmark& benchmark, const BackendFactory& factory, const agent::Agents& agents,
                   const SuiteOptions& options) {
    SuiteRun out;
    std::vector<ReportRow> rows;
    if (options.trace_dir) std::filesystem::create_directories(*options.trace_dir);
    for (const auto& spec : benchmark.scenarios) {
        std::ofstream file;
        if (options.trace_dir) {
            const auto path = *options.trace_dir / (spec.id + ".trace");
            file.open(path, std::ios::binary);
            if (!file) throw Error(ErrorCode::Io, fmt::format("cannot write {}", path.string()));
        }
        out.runs.push_back(run_scenario(spec, factory, agents, options.run, file.is_open() ? &file : nullptr));
        rows.push_back(out.runs.back().row);
    }
    out.report = aggregate(options.label, std::move(rows));
    return out;
}

BackendFactory scripted_factory(const std::string& policy_id) {
    const llm::Policy policy = llm::find_policy(policy_id);
    return [policy](const ScenarioSpec&) { return std::make_unique<llm::ScriptedBackend>(policy); };
}

BackendFactory replay_factory(const std::filesystem::path& dir) {
    return [dir](const ScenarioSpec& spec) {
        return std::make_unique<llm::ReplayBackend>(llm::ReplayBackend::from_file(dir / (spec.id + ".trace")));
    };
}

BackendFactory config_factory(const llm::BackendConfig& cfg) {
    llm::validate_config(cfg);
    if (const auto* r = std::get_if<llm::ReplayConfig>(&cfg.kind)) {
        if (std::filesystem::is_directory(r->trace_path)) return replay_factory(r->trace_path);
    }
    return [cfg](const ScenarioSpec&) { return llm::make_backend(cfg); };
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("RCS_DATA_DIR"); env && *env) return env;
    return RCS_DATA_DIR;
}

}  // namespace rcs::bench
