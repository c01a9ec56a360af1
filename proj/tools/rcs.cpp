// rcs: run single requests, the benchmark suite, trace replays, or a robot server.
#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rcs/agent/episode.hpp"
#include "rcs/bench/report.hpp"
#include "rcs/bench/scenario.hpp"
#include "rcs/bench/suite_runner.hpp"
#include "rcs/bridge/bridge_link.hpp"
#include "rcs/bridge/robot_server.hpp"
#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"
#include "rcs/llm/backend.hpp"
#include "rcs/sim/sim_link.hpp"

namespace {

using namespace rcs;

std::atomic<bool> g_stop{false};

struct BackendArgs {
    std::string kind = "mock";
    std::string policy = "oracle";
    std::string replay;
    std::string endpoint;
    std::string model;
    std::string api_key_env = "OPENAI_API_KEY";
    double timeout_s = 60;
    bool vision = false;
    int max_retries = 3;
    double temperature = 0;

    void add_to(CLI::App* cmd, bool replay_dir) {
        cmd->add_option("--backend", kind, "mock | replay | http")
            ->check(CLI::IsMember({"mock", "replay", "http"}));
        cmd->add_option("--policy", policy, "scripted policy for --backend mock");
        cmd->add_option("--replay", replay,
                        replay_dir ? "directory of <scenario id>.trace files" : "completions file for --backend replay");
        cmd->add_option("--endpoint", endpoint, "chat-completions URL for --backend http");
        cmd->add_option("--model", model, "model name for --backend http");
        cmd->add_option("--api-key-env", api_key_env, "environment variable holding the API key");
        cmd->add_option("--timeout", timeout_s, "request timeout in seconds");
        cmd->add_flag("--vision", vision, "attach camera images to http requests");
        cmd->add_option("--max-retries", max_retries, "retries after a bad completion");
        cmd->add_option("--temperature", temperature);
    }

    llm::BackendConfig config() const {
        llm::BackendConfig cfg;
        cfg.max_retries = max_retries;
        cfg.temperature = temperature;
        if (kind == "mock") {
            cfg.kind = llm::ScriptedConfig{policy};
        } else if (kind == "replay") {
            cfg.kind = llm::ReplayConfig{replay};
        } else {
            cfg.kind = llm::HttpChatConfig{endpoint, model, timeout_s, api_key_env, vision};
        }
        llm::validate_config(cfg);
        return cfg;
    }
};

std::optional<bridge::Transport> parse_transport(const std::string& s) {
    if (s == "direct") return std::nullopt;
    return bridge::Transport::parse(s);
}

std::filesystem::path template_dir(const std::string& arg) {
    return arg.empty() ? llm::default_template_dir() : std::filesystem::path(arg);
}

int cmd_run(const std::string& request_text, const std::string& world_file, const BackendArgs& backend,
            const std::string& transport_arg, int max_steps, const std::string& trace_file, const std::string& tdir,
            const std::string& goal_text) {
    const auto world = sim::load_world_file(world_file);
    const auto cfg = backend.config();
    auto llm_backend = llm::make_backend(cfg);
    const auto agents = agent::Agents::from_dir(template_dir(tdir));
    const auto limits = agent::EpisodeLimits::with_steps(max_steps);
    const auto request = make_request(request_text, "cli");
    agent::EpisodeOptions opts;
    opts.max_retries = cfg.max_retries;

    std::ofstream trace_out(trace_file, std::ios::binary);
    if (!trace_out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", trace_file));
    agent::TraceWriter writer(trace_out);
    writer.header(request, limits, sim::world_to_json(world));

    agent::EpisodeResult result;
    std::optional<sim::WorldState> final_world;
    const auto transport = parse_transport(transport_arg);
    if (!transport) {
        sim::SimLink link(world);
        result = agent::run_episode(request, link, *llm_backend, *llm_backend, limits, agents, opts, &writer);
        final_world = link.world();
    } else if (transport->kind == bridge::Transport::Kind::Tcp) {
        // A running `serve` process owns the world.
        auto session = bridge::RobotSession::connect(*transport);
        result = agent::run_episode(request, session->link(), *llm_backend, *llm_backend, limits, agents, opts,
                                    &writer);
        session->close();
    } else {
        auto session = bridge::RobotSession::spawn(world, *transport);
        result = agent::run_episode(request, session->link(), *llm_backend, *llm_backend, limits, agents, opts,
                                    &writer);
        final_world = session->close();
    }

    for (const auto& r : result.trace.rounds()) {
        std::cout << fmt::format("[{}] {} {}\n", r.index, status_token(r.status),
                                 r.action ? describe(*r.action) : std::string("-"));
        if (!r.comment.empty()) std::cout << "    " << r.comment << "\n";
    }
    std::cout << fmt::format("{}{} - Step : {}\n", agent::verdict_name(result.verdict),
                             result.failure_reason
                                 ? fmt::format(" ({})", agent::failure_reason_name(*result.failure_reason))
                                 : std::string(),
                             result.steps);
    if (!goal_text.empty()) {
        if (!final_world) throw Error(ErrorCode::Malformed, "--goal needs the world in this process");
        const auto goal = bench::goal_from_json(nlohmann::json::parse(goal_text));
        const auto j = bench::judge(result, goal, *final_world);
        std::cout << fmt::format("judged: {}{}\n", agent::verdict_name(j.verdict),
                                 j.reason ? fmt::format(" ({})", agent::failure_reason_name(*j.reason)) : "");
        return j.verdict == agent::Verdict::Success ? 0 : 1;
    }
    return 0;
}

int cmd_bench(const std::string& suite, const BackendArgs& backend, const std::string& transport_arg,
              const std::string& out, const std::string& trace_dir, const std::string& label, const std::string& tdir,
              bool any_count) {
    const auto bm = any_count ? bench::load_scenarios(suite) : bench::load_benchmark(suite);
    const auto cfg = backend.config();
    const auto agents = agent::Agents::from_dir(template_dir(tdir));

    bench::BackendFactory factory;
    if (backend.kind == "mock") {
        factory = bench::scripted_factory(backend.policy);
    } else if (backend.kind == "replay") {
        factory = bench::replay_factory(backend.replay);
    } else {
        factory = bench::config_factory(cfg);
    }

    bench::SuiteOptions opts;
    opts.label = label.empty() ? (backend.kind == "http" ? backend.model : backend.kind) : label;
    opts.run.transport = parse_transport(transport_arg);
    opts.run.episode.max_retries = cfg.max_retries;
    if (!trace_dir.empty()) opts.trace_dir = trace_dir;

    const auto run = bench::run_suite(bm, factory, agents, opts);
    for (const auto& r : run.runs)
        if (r.error) std::cerr << fmt::format("{}: {}\n", r.row.id, *r.error);
    std::cout << bench::render_tables({run.report});
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw Error(ErrorCode::Io, fmt::format("cannot write {}", out));
        f << bench::report_to_json(run.report).dump(2) << "\n";
    }
    return 0;
}

// Re-runs a recorded episode against its embedded world and checks the outcome.
int cmd_replay(const std::string& trace_file, const std::string& tdir) {
    std::ifstream in(trace_file, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open {}", trace_file));
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    std::optional<nlohmann::json> header;
    std::optional<nlohmann::json> recorded;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        const auto kind = j.value("record", "");
        if (kind == "episode") header = j;
        if (kind == "result") recorded = j;
    }
    if (!header || !header->contains("world"))
        throw Error(ErrorCode::Malformed, "trace has no episode header with a world");

    const auto request = header->at("request").get<UserRequest>();
    agent::EpisodeLimits limits{header->at("limits").at("max_steps").get<int>(),
                                header->at("limits").at("max_rounds").get<int>()};
    sim::SimLink link(sim::load_world(header->at("world")));
    llm::ReplayBackend backend(llm::parse_replay_lines(text));
    const auto agents = agent::Agents::from_dir(template_dir(tdir));
    const auto result = agent::run_episode(request, link, backend, backend, limits, agents);
    auto replayed = agent::result_to_json(result);
    replayed["record"] = "result";
    std::cout << replayed.dump() << "\n";
    if (recorded) {
        const bool same = *recorded == replayed;
        std::cout << (same ? "replay matches the recorded result\n" : "replay DIFFERS from the recorded result\n");
        return same ? 0 : 1;
    }
    return 0;
}

int cmd_serve(const std::string& world_file, const std::string& listen) {
    const auto world = sim::load_world_file(world_file);
    const auto t = bridge::Transport::parse("tcp:" + listen);
    std::signal(SIGINT, [](int) { g_stop = true; });
    std::signal(SIGTERM, [](int) { g_stop = true; });
    bridge::serve_robot(world, t.host, t.port, g_stop,
                        [](std::uint16_t port) { std::cerr << fmt::format("listening on port {}\n", port); });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual-agent robot control: episodes, benchmark, replay and robot server"};
    app.require_subcommand(1);
    std::string tdir;
    app.add_option("--templates", tdir, "prompt template directory");

    auto* run = app.add_subcommand("run", "run one request");
    std::string request, world, transport = "local:", trace, goal;
    int max_steps = 20;
    BackendArgs run_backend;
    run->add_option("--request", request)->required();
    run->add_option("--world", world)->required()->check(CLI::ExistingFile);
    run_backend.add_to(run, false);
    run->add_option("--transport", transport, "local: | tcp:HOST:PORT | direct");
    run->add_option("--max-steps", max_steps)->check(CLI::PositiveNumber);
    run->add_option("--trace", trace, "episode trace output")->required();
    run->add_option("--goal", goal, "goal predicate document to judge the episode against");

    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    std::string suite = (rcs::bench::default_data_dir() / "suite.json").string(), out, trace_dir, label;
    std::string bench_transport = "local:";
    bool any_count = false;
    BackendArgs bench_backend;
    bench_cmd->add_option("--suite", suite)->check(CLI::ExistingFile);
    bench_backend.add_to(bench_cmd, true);
    bench_cmd->add_option("--transport", bench_transport, "local: | tcp:HOST:PORT | direct");
    bench_cmd->add_option("--out", out, "JSON report output");
    bench_cmd->add_option("--trace-dir", trace_dir, "write <id>.trace per scenario");
    bench_cmd->add_option("--label", label, "column name in the report");
    bench_cmd->add_flag("--any-count", any_count, "accept suites without five scenarios per domain");

    auto* replay = app.add_subcommand("replay", "re-run a recorded episode trace");
    std::string replay_trace;
    replay->add_option("--trace", replay_trace)->required()->check(CLI::ExistingFile);

    auto* serve = app.add_subcommand("serve", "serve a simulated robot over TCP");
    std::string serve_world, listen = "127.0.0.1:9090";
    serve->add_option("--world", serve_world)->required()->check(CLI::ExistingFile);
    serve->add_option("--listen", listen, "HOST:PORT");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(request, world, run_backend, transport, max_steps, trace, tdir, goal);
        if (*bench_cmd)
            return cmd_bench(suite, bench_backend, bench_transport, out, trace_dir, label, tdir, any_count);
        if (*replay) return cmd_replay(replay_trace, tdir);
        if (*serve) return cmd_serve(serve_world, listen);
    } catch (const rcs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
