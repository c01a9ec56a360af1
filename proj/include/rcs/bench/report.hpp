#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rcs/agent/episode.hpp"
#include "rcs/bench/scenario.hpp"

namespace rcs::bench {

struct Judgement {
    agent::Verdict verdict = agent::Verdict::Failure;
    std::optional<agent::FailureReason> reason;

    bool operator==(const Judgement&) const = default;
};

// Pure. StepLimit and BackendError exits pass through; a FINISH is a Success
// only when the goal holds on the final world and trace.
Judgement judge(const agent::EpisodeResult& result, const Goal& goal, const sim::WorldState& final_world);

struct ReportRow {
    std::string id;
    Domain domain = Domain::ObjectDetection;
    std::string request_text;
    Judgement judgement;
    int steps = 0;
};

struct DomainRate {
    Domain domain = Domain::ObjectDetection;
    int successes = 0;
    int total = 0;
    double rate = 0;  // percent
};

struct Report {
    std::string backend;
    std::vector<ReportRow> rows;
    std::vector<DomainRate> domains;  // only domains with at least one row
    int successes = 0;
    int total = 0;
    double overall_rate = 0;  // percent

    const DomainRate* domain(Domain d) const;
    const ReportRow* row(std::string_view id) const;
};

Report aggregate(std::string backend, std::vector<ReportRow> rows);

// "Success - Step : 6"
std::string outcome_cell(const ReportRow& row);

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

// One table per domain with a column per report, rows in suite order.
std::string render_tables(const std::vector<Report>& reports);

}  // namespace rcs::bench
