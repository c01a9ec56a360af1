#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rcs/llm/prompt.hpp"

namespace rcs::llm {

struct HttpChatConfig {
    // Full URL of the chat-completions route, e.g. http://127.0.0.1:8080/v1/chat/completions
    std::string endpoint;
    std::string model_name;
    double timeout_s = 60.0;
    // Name of the environment variable holding the API key; empty for none.
    std::string api_key_env = "OPENAI_API_KEY";
    // Forward observation image attachments as data URLs.
    bool vision = false;
};

struct ScriptedConfig {
    std::string policy_id;
};

struct ReplayConfig {
    std::filesystem::path trace_path;
};

struct BackendConfig {
    std::variant<HttpChatConfig, ScriptedConfig, ReplayConfig> kind;
    int max_retries = 3;
    double temperature = 0.0;
};

// Throws Malformed when max_retries is negative or a required field is empty.
void validate_config(const BackendConfig& cfg);

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const Prompt& prompt) = 0;
};

class HttpChatBackend final : public Backend {
public:
    HttpChatBackend(HttpChatConfig cfg, double temperature);
    std::string complete(const Prompt& prompt) override;

    // Request document sent to the endpoint; exposed for tests.
    nlohmann::json request_body(const Prompt& prompt) const;

private:
    HttpChatConfig cfg_;
    double temperature_;
};

// Deterministic function of the prompt.
using Policy = std::function<std::string(const Prompt&)>;

class ScriptedBackend final : public Backend {
public:
    // Throws PolicyUnknown for an unregistered id.
    explicit ScriptedBackend(const std::string& policy_id);
    explicit ScriptedBackend(Policy policy) : policy_(std::move(policy)) {}
    std::string complete(const Prompt& prompt) override { return policy_(prompt); }

private:
    Policy policy_;
};

// Serves recorded completions in call order; the only stateful backend.
class ReplayBackend final : public Backend {
public:
    explicit ReplayBackend(std::vector<std::string> completions) : completions_(std::move(completions)) {}
    static ReplayBackend from_file(const std::filesystem::path& path);

    std::string complete(const Prompt& prompt) override;
    std::size_t remaining() const { return completions_.size() - cursor_; }

private:
    std::vector<std::string> completions_;
    std::size_t cursor_ = 0;
};

// Completions, one per line. A line holding an episode-trace record contributes
// its raw_completions; a line holding a JSON string literal is decoded; any
// other non-blank line is taken verbatim.
std::vector<std::string> parse_replay_lines(std::string_view text);
// Inverse of the line rules above for a single completion.
std::string encode_replay_line(const std::string& completion);

// Wraps another backend and keeps every completion it returned.
class RecordingBackend final : public Backend {
public:
    explicit RecordingBackend(Backend& inner) : inner_(inner) {}
    std::string complete(const Prompt& prompt) override;
    std::vector<std::string> take();

private:
    Backend& inner_;
    std::vector<std::string> recorded_;
};

std::unique_ptr<Backend> make_backend(const BackendConfig& cfg);

// Registered scripted policies: "oracle", "finish_immediately", "never_finish".
std::vector<std::string> scripted_policy_ids();
Policy find_policy(const std::string& id);

}  // namespace rcs::llm
