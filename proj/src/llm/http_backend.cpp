#include <cstdlib>
#include <regex>

#include <fmt/format.h>

#include "httplib.h"

#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"
#include "rcs/llm/backend.hpp"

namespace rcs::llm {

using nlohmann::json;

namespace {

struct Url {
    std::string origin;  // scheme://host:port
    std::string path;
};

Url split_url(const std::string& endpoint) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(endpoint, m, re)) {
        throw Error(ErrorCode::Transport, fmt::format("bad endpoint '{}'", endpoint));
    }
    return {m[1].str(), m[2].matched ? m[2].str() : "/v1/chat/completions"};
}

}  // namespace

HttpChatBackend::HttpChatBackend(HttpChatConfig cfg, double temperature)
    : cfg_(std::move(cfg)), temperature_(temperature) {}

json HttpChatBackend::request_body(const Prompt& prompt) const {
    json messages = json::array();
    messages.push_back({{"role", "system"}, {"content", prompt.system}});
    for (const auto& shot : prompt.few_shot) {
        messages.push_back({{"role", "user"}, {"content", shot.example_input}});
        messages.push_back({{"role", "assistant"}, {"content", shot.example_output}});
    }
    json user_content = prompt.user_text();
    if (cfg_.vision) {
        json parts = json::array({{{"type", "text"}, {"text", prompt.user_text()}}});
        for (const auto& b : prompt.user_blocks) {
            if (!b.image_attachment) continue;
            parts.push_back({{"type", "image_url"},
                             {"image_url", {{"url", "data:image/png;base64," + base64_encode(*b.image_attachment)}}}});
        }
        if (parts.size() > 1) user_content = std::move(parts);
    }
    messages.push_back({{"role", "user"}, {"content", std::move(user_content)}});
    return {{"model", cfg_.model_name}, {"messages", std::move(messages)}, {"temperature", temperature_}};
}

std::string HttpChatBackend::complete(const Prompt& prompt) {
    const Url url = split_url(cfg_.endpoint);
    httplib::Client client(url.origin);
    const auto secs = static_cast<time_t>(cfg_.timeout_s);
    const auto usecs = static_cast<time_t>((cfg_.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!cfg_.api_key_env.empty()) {
        if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", fmt::format("Bearer {}", key));
        }
    }
    auto res = client.Post(url.path, headers, request_body(prompt).dump(), "application/json");
    if (!res) {
        throw Error(ErrorCode::Transport, fmt::format("{}: {}", cfg_.endpoint, httplib::to_string(res.error())));
    }
    if (res->status != 200) {
        throw Error(ErrorCode::Transport, fmt::format("{} returned HTTP {}", cfg_.endpoint, res->status));
    }
    json body = json::parse(res->body, nullptr, false);
    if (body.is_discarded()) throw Error(ErrorCode::Transport, "response is not JSON");
    try {
        const json& content = body.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw Error(ErrorCode::Transport, "response content is not text");
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Transport, fmt::format("unexpected response shape: {}", e.what()));
    }
}

}  // namespace rcs::llm
