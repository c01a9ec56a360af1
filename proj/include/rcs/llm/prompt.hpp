#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rcs::llm {

enum class BlockKind { Request, Plan, Observation, Sensors, Memory };

std::string_view block_kind_name(BlockKind k);

struct Block {
    BlockKind kind = BlockKind::Request;
    // Final text shown to the model, after template expansion.
    std::string text;
    // The unformatted input that was substituted into the template.
    std::string content;
    std::optional<std::vector<std::uint8_t>> image_attachment;
};

struct FewShot {
    std::string example_input;
    std::string example_output;
};

struct Prompt {
    std::string system;
    std::vector<FewShot> few_shot;
    std::vector<Block> user_blocks;

    const Block* block(BlockKind kind) const;
    // User blocks joined by blank lines.
    std::string user_text() const;
};

// Throws Malformed unless there is exactly one request block and blocks follow
// the order request, plan, observation, sensors, memory.
void validate_prompt(const Prompt& prompt);

nlohmann::json prompt_to_json(const Prompt& prompt);
std::string prompt_digest(const Prompt& prompt);

// Plain-text prompt template. Sections start with a line "@@ <name>":
//   @@ system             system message
//   @@ example / @@ output  one few-shot pair (repeatable, in order)
//   @@ block <kind>       template for a user block, e.g. "User request: {request}"
// Lines before the first section are comments. Only the placeholders
// {request} {plan} {observation} {sensors} {memory} are substituted.
class PromptTemplate {
public:
    static PromptTemplate parse(std::string_view text);
    static PromptTemplate load(const std::filesystem::path& path);

    const std::string& system() const { return system_; }
    const std::vector<FewShot>& examples() const { return examples_; }
    std::string render_block(BlockKind kind, const std::string& content) const;

private:
    std::string system_;
    std::vector<FewShot> examples_;
    std::map<BlockKind, std::string> blocks_;
};

// Directory holding host_agent.tmpl and app_agent.tmpl. RCS_TEMPLATE_DIR in the
// environment wins over the build-time default.
std::filesystem::path default_template_dir();

}  // namespace rcs::llm
