#include "rcs/agent/host_agent.hpp"

#include <fmt/format.h>

#include "blocks.hpp"
#include "rcs/llm/retry.hpp"

namespace rcs::agent {

std::string render_sensors(const SensorData& s) {
    return fmt::format("ultrasonic_clearance: {:.3f} m\nir_left: {}\nir_right: {}", s.ultrasonic_clearance,
                       s.ir_left ? "true" : "false", s.ir_right ? "true" : "false");
}

std::string render_plan(const GlobalPlan& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        if (i > 0) out += '\n';
        out += fmt::format("{}. {}", i + 1, plan.steps[i]);
    }
    return out;
}

namespace detail {

llm::Block make_block(const llm::PromptTemplate& tmpl, llm::BlockKind kind, std::string content) {
    llm::Block b;
    b.kind = kind;
    b.text = tmpl.render_block(kind, content.empty() ? std::string("(none)") : content);
    b.content = std::move(content);
    return b;
}

}  // namespace detail

llm::Prompt build_host_prompt(const llm::PromptTemplate& tmpl, const UserRequest& request, const Observation& obs,
                              const SensorData& sensors, const MemoryLog& memory, std::size_t memory_window) {
    using llm::BlockKind;
    llm::Prompt p;
    p.system = tmpl.system();
    p.few_shot = tmpl.examples();
    p.user_blocks.push_back(detail::make_block(tmpl, BlockKind::Request, request.text));
    auto ob = detail::make_block(tmpl, BlockKind::Observation, obs.free_text);
    ob.image_attachment = obs.image_attachment;
    p.user_blocks.push_back(std::move(ob));
    p.user_blocks.push_back(detail::make_block(tmpl, BlockKind::Sensors, render_sensors(sensors)));
    p.user_blocks.push_back(detail::make_block(tmpl, BlockKind::Memory, render_memory(memory, memory_window)));
    return p;
}

HostAgent HostAgent::from_dir(const std::filesystem::path& template_dir) {
    return HostAgent(llm::PromptTemplate::load(template_dir / "host_agent.tmpl"));
}

llm::Prompt HostAgent::build_prompt(const UserRequest& request, const Observation& obs, const SensorData& sensors,
                                    const MemoryLog& memory) const {
    return build_host_prompt(tmpl_, request, obs, sensors, memory);
}

llm::HostDecision HostAgent::plan(const UserRequest& request, const Observation& obs, const SensorData& sensors,
                                  const MemoryLog& memory, llm::Backend& backend, int max_retries) const {
    const llm::Prompt prompt = build_prompt(request, obs, sensors, memory);
    return llm::with_retry([&] { return llm::parse_host_decision(backend.complete(prompt)); }, max_retries);
}

}  // namespace rcs::agent
