#pragma once

#include <cstddef>
#include <filesystem>

#include "rcs/core/memory.hpp"
#include "rcs/core/types.hpp"
#include "rcs/llm/backend.hpp"
#include "rcs/llm/decision.hpp"
#include "rcs/llm/prompt.hpp"

namespace rcs::agent {

inline constexpr std::size_t kAppMemoryWindow = 10;

llm::Prompt build_app_prompt(const llm::PromptTemplate& tmpl, const UserRequest& request, const GlobalPlan& plan,
                             const Observation& obs, const SensorData& sensors, const MemoryLog& memory,
                             std::size_t memory_window = kAppMemoryWindow);

// Picks the next command, or FINISH, from the plan and the latest feedback.
class AppAgent {
public:
    explicit AppAgent(llm::PromptTemplate tmpl) : tmpl_(std::move(tmpl)) {}
    static AppAgent from_dir(const std::filesystem::path& template_dir);

    llm::Prompt build_prompt(const UserRequest& request, const GlobalPlan& plan, const Observation& obs,
                             const SensorData& sensors, const MemoryLog& memory) const;

    llm::AppDecision decide(const UserRequest& request, const GlobalPlan& plan, const Observation& obs,
                            const SensorData& sensors, const MemoryLog& memory, llm::Backend& backend,
                            int max_retries = 3) const;

private:
    llm::PromptTemplate tmpl_;
};

}  // namespace rcs::agent
