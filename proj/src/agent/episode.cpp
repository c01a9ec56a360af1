#include "rcs/agent/episode.hpp"

#include <fmt/format.h>

#include "rcs/core/digest.hpp"
#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"
#include "rcs/llm/retry.hpp"

namespace rcs::agent {

using nlohmann::json;

void EpisodeLimits::validate() const {
    if (max_steps < 1) throw Error(ErrorCode::Malformed, "max_steps must be >= 1");
    if (max_rounds < max_steps) throw Error(ErrorCode::Malformed, "max_rounds must be >= max_steps");
}

std::string_view verdict_name(Verdict v) { return v == Verdict::Success ? "Success" : "Failure"; }

std::string_view failure_reason_name(FailureReason r) {
    switch (r) {
        case FailureReason::StepLimit: return "StepLimit";
        case FailureReason::FalseCompletion: return "FalseCompletion";
        case FailureReason::BackendError: return "BackendError";
    }
    return "BackendError";
}

Verdict parse_verdict(std::string_view s) {
    if (s == "Success") return Verdict::Success;
    if (s == "Failure") return Verdict::Failure;
    throw Error(ErrorCode::Malformed, fmt::format("unknown verdict '{}'", s));
}

FailureReason parse_failure_reason(std::string_view s) {
    if (s == "StepLimit") return FailureReason::StepLimit;
    if (s == "FalseCompletion") return FailureReason::FalseCompletion;
    if (s == "BackendError") return FailureReason::BackendError;
    throw Error(ErrorCode::Malformed, fmt::format("unknown failure reason '{}'", s));
}

void TraceWriter::header(const UserRequest& request, const EpisodeLimits& limits,
                         const std::optional<json>& world) {
    json rec{{"record", "episode"},
             {"request", request},
             {"limits", {{"max_steps", limits.max_steps}, {"max_rounds", limits.max_rounds}}}};
    if (world) rec["world"] = *world;
    record(rec);
}

void TraceWriter::record(const json& rec) { out_ << dump_line(rec) << '\n'; }

Agents Agents::from_dir(const std::filesystem::path& template_dir) {
    return Agents{HostAgent::from_dir(template_dir), AppAgent::from_dir(template_dir)};
}

json result_to_json(const EpisodeResult& r) {
    json j{{"request_id", r.request_id}, {"verdict", std::string(verdict_name(r.verdict))}};
    j["failure_reason"] = r.failure_reason ? json(std::string(failure_reason_name(*r.failure_reason))) : json();
    j["steps"] = r.steps;
    j["rounds"] = r.rounds;
    j["finished"] = r.finished;
    j["host_calls"] = r.host_calls;
    j["final_world_digest"] = r.final_world_digest;
    return j;
}

namespace {

std::string snapshot_digest(const Snapshot& s) {
    return sha256_hex(dump_line(json{{"sensors", s.sensors}, {"observation", s.observation}}));
}

}  // namespace

EpisodeResult run_episode(const UserRequest& request, RobotLink& robot, llm::Backend& host_backend,
                          llm::Backend& app_backend, const EpisodeLimits& limits, const Agents& agents,
                          const EpisodeOptions& options, TraceWriter* trace) {
    limits.validate();
    if (options.max_retries < 0) throw Error(ErrorCode::Malformed, "max_retries must be >= 0");

    // One recorder per distinct backend so a shared replay cursor is recorded once.
    llm::RecordingBackend host_rec(host_backend);
    std::optional<llm::RecordingBackend> app_rec_storage;
    if (&app_backend != &host_backend) app_rec_storage.emplace(app_backend);
    llm::RecordingBackend& app_rec = app_rec_storage ? *app_rec_storage : host_rec;

    EpisodeResult result;
    result.request_id = request.id;
    MemoryLog memory;
    Snapshot snap = robot.observe();
    std::optional<std::string> pending_thoughts;

    const auto emit = [&](const json& rec) {
        if (trace) trace->record(rec);
    };

    const auto plan = [&]() -> bool {
        const llm::Prompt prompt = agents.host.build_prompt(request, snap.observation, snap.sensors, memory);
        json rec{{"record", "host"}, {"prompt_digest", llm::prompt_digest(prompt)}};
        ++result.host_calls;
        try {
            auto decision = llm::with_retry(
                [&] { return llm::parse_host_decision(host_rec.complete(prompt)); }, options.max_retries);
            rec["raw_completions"] = host_rec.take();
            rec["decision"] = llm::host_decision_to_json(decision);
            emit(rec);
            result.plan = decision.global_plan;
            pending_thoughts = decision.thoughts;
            return true;
        } catch (const Error& e) {
            rec["raw_completions"] = host_rec.take();
            rec["error"] = e.what();
            emit(rec);
            return false;
        }
    };

    const auto fail = [&](FailureReason reason) {
        result.verdict = Verdict::Failure;
        result.failure_reason = reason;
    };

    if (!plan()) {
        fail(FailureReason::BackendError);
    } else {
        int consecutive_errors = 0;
        bool replanned = false;
        const int error_limit = options.replan_after_errors > 0 ? options.replan_after_errors : 3;
        while (true) {
            if (result.rounds >= limits.max_rounds) {
                fail(FailureReason::StepLimit);
                break;
            }
            const llm::Prompt prompt =
                agents.app.build_prompt(request, result.plan, snap.observation, snap.sensors, memory);
            json rec{{"record", "round"}, {"index", result.rounds}, {"prompt_digest", llm::prompt_digest(prompt)}};
            Round round;
            round.index = result.rounds;
            round.observation = snap.observation;
            round.thoughts = std::exchange(pending_thoughts, std::nullopt);

            std::optional<llm::AppDecision> decision;
            try {
                decision = llm::with_retry([&] { return llm::parse_app_decision(app_rec.complete(prompt)); },
                                           options.max_retries);
            } catch (const Error& e) {
                rec["raw_completions"] = app_rec.take();
                rec["error"] = e.what();
                round.comment = fmt::format("error: {}", e.what());
                round.status = Status::Continue;
                memory = memory.append(round);
                rec["round"] = round;
                emit(rec);
                ++result.rounds;
                if (++consecutive_errors < error_limit) continue;
                if (options.replan_after_errors > 0 && !replanned) {
                    replanned = true;
                    consecutive_errors = 0;
                    if (plan()) continue;
                }
                fail(FailureReason::BackendError);
                break;
            }
            consecutive_errors = 0;
            rec["raw_completions"] = app_rec.take();
            rec["decision"] = llm::app_decision_to_json(*decision);
            round.comment = decision->comment;
            round.status = decision->status;

            if (decision->status == Status::Finish) {
                memory = memory.append(round);
                rec["round"] = round;
                emit(rec);
                ++result.rounds;
                result.finished = true;
                result.verdict = Verdict::Success;
                break;
            }

            round.action = *decision->command;
            round.exec_result = robot.execute(*decision->command);
            memory = memory.append(round);
            rec["round"] = round;
            emit(rec);
            ++result.rounds;
            ++result.steps;
            snap = robot.observe();
            if (result.steps >= limits.max_steps) {
                fail(FailureReason::StepLimit);
                break;
            }
        }
    }

    result.trace = memory;
    result.final_world_digest = snapshot_digest(snap);
    json done = result_to_json(result);
    done["record"] = "result";
    emit(done);
    return result;
}

}  // namespace rcs::agent
