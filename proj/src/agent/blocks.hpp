#pragma once

#include <string>

#include "rcs/llm/prompt.hpp"

namespace rcs::agent::detail {

// Expands the block template; empty content renders as "(none)".
llm::Block make_block(const llm::PromptTemplate& tmpl, llm::BlockKind kind, std::string content);

}  // namespace rcs::agent::detail
