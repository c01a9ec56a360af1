#include "rcs/llm/prompt.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rcs/core/digest.hpp"
#include "rcs/core/serialize.hpp"
#include "rcs/error.hpp"

#ifndef RCS_DEFAULT_TEMPLATE_DIR
#define RCS_DEFAULT_TEMPLATE_DIR "data/templates"
#endif

namespace rcs::llm {

std::string_view block_kind_name(BlockKind k) {
    switch (k) {
        case BlockKind::Request: return "request";
        case BlockKind::Plan: return "plan";
        case BlockKind::Observation: return "observation";
        case BlockKind::Sensors: return "sensors";
        case BlockKind::Memory: return "memory";
    }
    return "request";
}

namespace {

std::optional<BlockKind> parse_block_kind(std::string_view s) {
    for (auto k : {BlockKind::Request, BlockKind::Plan, BlockKind::Observation, BlockKind::Sensors,
                   BlockKind::Memory}) {
        if (block_kind_name(k) == s) return k;
    }
    return std::nullopt;
}

std::string strip_trailing_newlines(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace

const Block* Prompt::block(BlockKind kind) const {
    for (const auto& b : user_blocks) {
        if (b.kind == kind) return &b;
    }
    return nullptr;
}

std::string Prompt::user_text() const {
    std::string out;
    for (const auto& b : user_blocks) {
        if (!out.empty()) out += "\n\n";
        out += b.text;
    }
    return out;
}

void validate_prompt(const Prompt& prompt) {
    int requests = 0;
    int last = -1;
    for (const auto& b : prompt.user_blocks) {
        const int order = static_cast<int>(b.kind);
        if (order <= last) throw Error(ErrorCode::Malformed, "prompt blocks out of order or repeated");
        last = order;
        if (b.kind == BlockKind::Request) ++requests;
    }
    if (requests != 1) throw Error(ErrorCode::Malformed, "prompt needs exactly one request block");
}

nlohmann::json prompt_to_json(const Prompt& prompt) {
    nlohmann::json shots = nlohmann::json::array();
    for (const auto& s : prompt.few_shot) shots.push_back({{"input", s.example_input}, {"output", s.example_output}});
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : prompt.user_blocks) {
        nlohmann::json jb{{"kind", std::string(block_kind_name(b.kind))}, {"text", b.text}};
        if (b.image_attachment) jb["image_attachment"] = base64_encode(*b.image_attachment);
        blocks.push_back(std::move(jb));
    }
    return {{"system", prompt.system}, {"few_shot", shots}, {"user_blocks", blocks}};
}

std::string prompt_digest(const Prompt& prompt) { return sha256_hex(dump_line(prompt_to_json(prompt))); }

PromptTemplate PromptTemplate::parse(std::string_view text) {
    PromptTemplate t;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string section;
    std::string body;
    std::optional<std::string> pending_input;

    const auto flush = [&] {
        std::string content = strip_trailing_newlines(body);
        body.clear();
        if (section.empty()) return;
        if (section == "system") {
            t.system_ = content;
        } else if (section == "example") {
            if (pending_input) throw Error(ErrorCode::Malformed, "template example without output");
            pending_input = content;
        } else if (section == "output") {
            if (!pending_input) throw Error(ErrorCode::Malformed, "template output without example");
            t.examples_.push_back({*pending_input, content});
            pending_input.reset();
        } else if (section.rfind("block ", 0) == 0) {
            auto kind = parse_block_kind(section.substr(6));
            if (!kind) throw Error(ErrorCode::Malformed, fmt::format("unknown template block '{}'", section));
            t.blocks_[*kind] = content;
        } else {
            throw Error(ErrorCode::Malformed, fmt::format("unknown template section '{}'", section));
        }
    };

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("@@ ", 0) == 0) {
            flush();
            section = line.substr(3);
            continue;
        }
        if (!section.empty()) body += line + "\n";
    }
    flush();
    if (pending_input) throw Error(ErrorCode::Malformed, "template example without output");
    return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open template {}", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string PromptTemplate::render_block(BlockKind kind, const std::string& content) const {
    auto it = blocks_.find(kind);
    const std::string placeholder = fmt::format("{{{}}}", block_kind_name(kind));
    std::string out = it == blocks_.end() ? placeholder : it->second;
    for (std::size_t pos = out.find(placeholder); pos != std::string::npos;
         pos = out.find(placeholder, pos + content.size())) {
        out.replace(pos, placeholder.size(), content);
    }
    return out;
}

std::filesystem::path default_template_dir() {
    if (const char* env = std::getenv("RCS_TEMPLATE_DIR"); env && *env) return env;
    return RCS_DEFAULT_TEMPLATE_DIR;
}

}  // namespace rcs::llm
