#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rcs/agent/app_agent.hpp"
#include "rcs/agent/host_agent.hpp"
#include "rcs/core/memory.hpp"
#include "rcs/core/robot_link.hpp"
#include "rcs/llm/backend.hpp"

namespace rcs::agent {

struct EpisodeLimits {
    int max_steps = 20;
    int max_rounds = 25;

    // max_rounds = max_steps + 5
    static EpisodeLimits with_steps(int max_steps) { return {max_steps, max_steps + 5}; }
    // Throws Malformed unless 1 <= max_steps <= max_rounds.
    void validate() const;
};

enum class Verdict { Success, Failure };
enum class FailureReason { StepLimit, FalseCompletion, BackendError };

std::string_view verdict_name(Verdict v);
std::string_view failure_reason_name(FailureReason r);
Verdict parse_verdict(std::string_view s);
FailureReason parse_failure_reason(std::string_view s);

struct EpisodeResult {
    std::string request_id;
    Verdict verdict = Verdict::Failure;
    std::optional<FailureReason> failure_reason;
    int steps = 0;
    int rounds = 0;
    MemoryLog trace;
    // Digest of the last sensor reading and camera frame seen by the orchestrator.
    std::string final_world_digest;
    GlobalPlan plan;
    int host_calls = 0;
    // Set when the App Agent ended the episode with FINISH.
    bool finished = false;
};

struct EpisodeOptions {
    int max_retries = 3;
    // Consecutive App Agent errors that trigger one replan; 0 disables replanning.
    int replan_after_errors = 3;
};

// Writes the episode trace: one JSON record per line. Records carry no wall
// clock data, so identical episodes give identical bytes.
class TraceWriter {
public:
    explicit TraceWriter(std::ostream& out) : out_(out) {}
    void header(const UserRequest& request, const EpisodeLimits& limits,
                const std::optional<nlohmann::json>& world = std::nullopt);
    void record(const nlohmann::json& rec);

private:
    std::ostream& out_;
};

struct Agents {
    HostAgent host;
    AppAgent app;

    static Agents from_dir(const std::filesystem::path& template_dir);
};

// Observe, plan once, then decide/act until FINISH or a limit. FINISH is taken
// at face value; grading happens elsewhere. Errors from the link propagate.
EpisodeResult run_episode(const UserRequest& request, RobotLink& robot, llm::Backend& host_backend,
                          llm::Backend& app_backend, const EpisodeLimits& limits, const Agents& agents,
                          const EpisodeOptions& options = {}, TraceWriter* trace = nullptr);

nlohmann::json result_to_json(const EpisodeResult& r);

}  // namespace rcs::agent
