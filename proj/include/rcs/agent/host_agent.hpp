#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <string>

#include "rcs/core/memory.hpp"
#include "rcs/core/types.hpp"
#include "rcs/llm/backend.hpp"
#include "rcs/llm/decision.hpp"
#include "rcs/llm/prompt.hpp"

namespace rcs::agent {

// "ultrasonic_clearance: 0.420 m" plus one line per IR flag.
std::string render_sensors(const SensorData& s);
// One numbered line per step.
std::string render_plan(const GlobalPlan& plan);

llm::Prompt build_host_prompt(const llm::PromptTemplate& tmpl, const UserRequest& request, const Observation& obs,
                              const SensorData& sensors, const MemoryLog& memory,
                              std::size_t memory_window = std::numeric_limits<std::size_t>::max());

// Turns a request and the current robot state into a global plan.
class HostAgent {
public:
    explicit HostAgent(llm::PromptTemplate tmpl) : tmpl_(std::move(tmpl)) {}
    static HostAgent from_dir(const std::filesystem::path& template_dir);

    llm::Prompt build_prompt(const UserRequest& request, const Observation& obs, const SensorData& sensors,
                             const MemoryLog& memory) const;

    // One planning call, retried on backend or parse errors.
    llm::HostDecision plan(const UserRequest& request, const Observation& obs, const SensorData& sensors,
                           const MemoryLog& memory, llm::Backend& backend,
                           int max_retries = 3) const;

private:
    llm::PromptTemplate tmpl_;
};

}  // namespace rcs::agent
