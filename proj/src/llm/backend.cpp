#include "rcs/llm/backend.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs::llm {

using nlohmann::json;

void validate_config(const BackendConfig& cfg) {
    if (cfg.max_retries < 0) throw Error(ErrorCode::Malformed, "max_retries must be >= 0");
    if (const auto* h = std::get_if<HttpChatConfig>(&cfg.kind)) {
        if (h->endpoint.empty()) throw Error(ErrorCode::Malformed, "http backend needs an endpoint");
        if (h->model_name.empty()) throw Error(ErrorCode::Malformed, "http backend needs a model name");
        if (!(h->timeout_s > 0)) throw Error(ErrorCode::Malformed, "timeout must be positive");
    } else if (const auto* s = std::get_if<ScriptedConfig>(&cfg.kind)) {
        if (s->policy_id.empty()) throw Error(ErrorCode::Malformed, "scripted backend needs a policy id");
    } else if (std::get<ReplayConfig>(cfg.kind).trace_path.empty()) {
        throw Error(ErrorCode::Malformed, "replay backend needs a trace path");
    }
}

ScriptedBackend::ScriptedBackend(const std::string& policy_id) : policy_(find_policy(policy_id)) {}

namespace {

bool is_trace_record(const json& j) { return j.is_object() && j.contains("record"); }

}  // namespace

std::vector<std::string> parse_replay_lines(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const char first = line[line.find_first_not_of(" \t")];
        if (first == '"' || first == '{') {
            json j = json::parse(line, nullptr, false);
            if (j.is_string()) {
                out.push_back(j.get<std::string>());
                continue;
            }
            if (is_trace_record(j)) {
                if (auto it = j.find("raw_completions"); it != j.end() && it->is_array()) {
                    for (const auto& c : *it) out.push_back(c.get<std::string>());
                }
                continue;
            }
        }
        out.push_back(line);
    }
    return out;
}

std::string encode_replay_line(const std::string& completion) {
    bool needs_quoting = completion.empty() || completion.find_first_of("\r\n") != std::string::npos ||
                         completion.front() == '"' || completion.front() == ' ' || completion.front() == '\t' ||
                         completion.back() == ' ' || completion.back() == '\t';
    if (!needs_quoting && completion.front() == '{') {
        json j = json::parse(completion, nullptr, false);
        needs_quoting = is_trace_record(j);
    }
    return needs_quoting ? json(completion).dump() : completion;
}

ReplayBackend ReplayBackend::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open replay trace {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return ReplayBackend(parse_replay_lines(ss.str()));
}

std::string ReplayBackend::complete(const Prompt&) {
    if (cursor_ >= completions_.size()) {
        throw Error(ErrorCode::ReplayExhausted, fmt::format("all {} recorded completions used", completions_.size()));
    }
    return completions_[cursor_++];
}

std::string RecordingBackend::complete(const Prompt& prompt) {
    std::string out = inner_.complete(prompt);
    recorded_.push_back(out);
    return out;
}

std::vector<std::string> RecordingBackend::take() {
    std::vector<std::string> out;
    out.swap(recorded_);
    return out;
}

std::unique_ptr<Backend> make_backend(const BackendConfig& cfg) {
    validate_config(cfg);
    if (const auto* h = std::get_if<HttpChatConfig>(&cfg.kind)) {
        return std::make_unique<HttpChatBackend>(*h, cfg.temperature);
    }
    if (const auto* s = std::get_if<ScriptedConfig>(&cfg.kind)) {
        return std::make_unique<ScriptedBackend>(s->policy_id);
    }
    return std::make_unique<ReplayBackend>(ReplayBackend::from_file(std::get<ReplayConfig>(cfg.kind).trace_path));
}

}  // namespace rcs::llm
