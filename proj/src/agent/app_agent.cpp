#include "rcs/agent/app_agent.hpp"

#include "blocks.hpp"
#include "rcs/agent/host_agent.hpp"
#include "rcs/llm/retry.hpp"

namespace rcs::agent {

llm::Prompt build_app_prompt(const llm::PromptTemplate& tmpl, const UserRequest& request, const GlobalPlan& plan,
                             const Observation& obs, const SensorData& sensors, const MemoryLog& memory,
                             std::size_t memory_window) {
    using llm::BlockKind;
    llm::Prompt p;
    p.system = tmpl.system();
    p.few_shot = tmpl.examples();
    p.user_blocks.push_back(detail::make_block(tmpl, BlockKind::Request, request.text));
    p.user_blocks.push_back(detail::make_block(tmpl, BlockKind::Plan, render_plan(plan)));
    auto ob = detail::make_block(tmpl, BlockKind::Observation, obs.free_text);
    ob.image_attachment = obs.image_attachment;
    p.user_blocks.push_back(std::move(ob));
    p.user_blocks.push_back(detail::make_block(tmpl, BlockKind::Sensors, render_sensors(sensors)));
    p.user_blocks.push_back(detail::make_block(tmpl, BlockKind::Memory, render_memory(memory, memory_window)));
    return p;
}

AppAgent AppAgent::from_dir(const std::filesystem::path& template_dir) {
    return AppAgent(llm::PromptTemplate::load(template_dir / "app_agent.tmpl"));
}

llm::Prompt AppAgent::build_prompt(const UserRequest& request, const GlobalPlan& plan, const Observation& obs,
                                   const SensorData& sensors, const MemoryLog& memory) const {
    return build_app_prompt(tmpl_, request, plan, obs, sensors, memory);
}

llm::AppDecision AppAgent::decide(const UserRequest& request, const GlobalPlan& plan, const Observation& obs,
                                  const SensorData& sensors, const MemoryLog& memory, llm::Backend& backend,
                                  int max_retries) const {
    const llm::Prompt prompt = build_prompt(request, plan, obs, sensors, memory);
    return llm::with_retry([&] { return llm::parse_app_decision(backend.complete(prompt)); }, max_retries);
}

}  // namespace rcs::agent
