#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcs/core/types.hpp"
#include "rcs/llm/prompt.hpp"

namespace rcs::llm {

// What a scripted policy can read back out of a prompt. Built from the raw
// block contents, so template wording does not matter.
struct PromptView {
    struct Item {
        std::string label;
        std::string color;
        std::string shape;
        double distance = 0;
        double bearing = 0;
        std::optional<std::string> text;
        std::optional<std::string> face;
    };

    struct PastRound {
        int index = 0;
        std::string status;
        std::string comment;
        std::string action;  // command name or "none"
        double arg = 0;
        std::string outcome;  // "none" when nothing was dispatched
        double travelled = 0;
        double heading_change = 0;
    };

    bool host = false;
    std::string request;
    std::vector<std::string> plan;
    std::vector<Item> items;
    SensorData sensors;
    std::vector<PastRound> memory;

    // Index of the round being decided.
    int round() const { return memory.empty() ? 0 : memory.back().index + 1; }
    // Sum of travelled distance over the remembered rounds.
    double travelled() const;
    const PastRound* last() const { return memory.empty() ? nullptr : &memory.back(); }
};

PromptView parse_prompt_view(const Prompt& prompt);

}  // namespace rcs::llm
