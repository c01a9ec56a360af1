#include "rcs/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs::bench {

using nlohmann::json;
using agent::FailureReason;
using agent::Verdict;

Judgement judge(const agent::EpisodeResult& result, const Goal& goal, const sim::WorldState& final_world) {
    if (!result.finished) {
        return {Verdict::Failure, result.failure_reason.value_or(FailureReason::StepLimit)};
    }
    if (evaluate(goal, final_world, result.trace)) return {Verdict::Success, std::nullopt};
    return {Verdict::Failure, FailureReason::FalseCompletion};
}

const DomainRate* Report::domain(Domain d) const {
    for (const auto& r : domains)
        if (r.domain == d) return &r;
    return nullptr;
}

const ReportRow* Report::row(std::string_view id) const {
    for (const auto& r : rows)
        if (r.id == id) return &r;
    return nullptr;
}

Report aggregate(std::string backend, std::vector<ReportRow> rows) {
    Report rep;
    rep.backend = std::move(backend);
    for (Domain d : kDomains) {
        DomainRate dr{d};
        for (const auto& r : rows) {
            if (r.domain != d) continue;
            ++dr.total;
            if (r.judgement.verdict == Verdict::Success) ++dr.successes;
        }
        if (dr.total == 0) continue;
        dr.rate = 100.0 * dr.successes / dr.total;
        rep.successes += dr.successes;
        rep.total += dr.total;
        rep.domains.push_back(dr);
    }
    rep.overall_rate = rep.total ? 100.0 * rep.successes / rep.total : 0.0;
    rep.rows = std::move(rows);
    return rep;
}

std::string outcome_cell(const ReportRow& row) {
    return fmt::format("{} - Step : {}", agent::verdict_name(row.judgement.verdict), row.steps);
}

json report_to_json(const Report& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json j{{"id", row.id},
               {"domain", std::string(domain_name(row.domain))},
               {"request_text", row.request_text},
               {"verdict", std::string(agent::verdict_name(row.judgement.verdict))},
               {"steps", row.steps}};
        j["failure_reason"] = row.judgement.reason
                                  ? json(std::string(agent::failure_reason_name(*row.judgement.reason)))
                                  : json();
        rows.push_back(std::move(j));
    }
    json domains = json::object();
    for (const auto& d : r.domains)
        domains[std::string(domain_name(d.domain))] = {
            {"successes", d.successes}, {"total", d.total}, {"success_rate", d.rate}};
    return {{"backend", r.backend},
            {"rows", rows},
            {"domains", domains},
            {"successes", r.successes},
            {"total", r.total},
            {"success_rate", r.overall_rate}};
}

Report report_from_json(const json& j) {
    try {
        std::vector<ReportRow> rows;
        for (const auto& row : j.at("rows")) {
            ReportRow r;
            r.id = row.at("id").get<std::string>();
            r.domain = parse_domain(row.at("domain").get<std::string>());
            r.request_text = row.at("request_text").get<std::string>();
            r.judgement.verdict = agent::parse_verdict(row.at("verdict").get<std::string>());
            if (row.contains("failure_reason") && !row.at("failure_reason").is_null())
                r.judgement.reason = agent::parse_failure_reason(row.at("failure_reason").get<std::string>());
            r.steps = row.at("steps").get<int>();
            rows.push_back(std::move(r));
        }
        return aggregate(j.at("backend").get<std::string>(), std::move(rows));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaError, fmt::format("report: {}", e.what()));
    }
}

namespace {

std::string pct(double v) { return v == std::floor(v) ? fmt::format("{:.0f}%", v) : fmt::format("{:.1f}%", v); }

}  // namespace

std::string render_tables(const std::vector<Report>& reports) {
    if (reports.empty()) return {};
    const Report& first = reports.front();
    std::string out;
    for (Domain d : kDomains) {
        std::vector<const ReportRow*> rows;
        for (const auto& r : first.rows)
            if (r.domain == d) rows.push_back(&r);
        if (rows.empty()) continue;

        std::size_t req_w = std::string_view("User Request").size();
        for (const auto* r : rows) req_w = std::max(req_w, r->request_text.size());
        std::vector<std::size_t> col_w;
        for (const auto& rep : reports) col_w.push_back(std::max<std::size_t>(rep.backend.size(), 20));

        out += fmt::format("{}\n", domain_title(d));
        std::string header = fmt::format("{:<3} | {:<{}}", "No", "User Request", req_w);
        for (std::size_t c = 0; c < reports.size(); ++c)
            header += fmt::format(" | {:<{}}", reports[c].backend, col_w[c]);
        out += header + "\n" + std::string(header.size(), '-') + "\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::string line = fmt::format("{:<3} | {:<{}}", i + 1, rows[i]->request_text, req_w);
            for (std::size_t c = 0; c < reports.size(); ++c) {
                const ReportRow* cell = reports[c].row(rows[i]->id);
                line += fmt::format(" | {:<{}}", cell ? outcome_cell(*cell) : "-", col_w[c]);
            }
            out += line + "\n";
        }
        std::string rate = fmt::format("{:<3} | {:<{}}", "", "Success rate", req_w);
        for (std::size_t c = 0; c < reports.size(); ++c) {
            const DomainRate* dr = reports[c].domain(d);
            rate += fmt::format(" | {:<{}}", dr ? pct(dr->rate) : "-", col_w[c]);
        }
        out += rate + "\n\n";
    }
    out += "Overall";
    for (const auto& rep : reports)
        out += fmt::format("  {}: {} ({}/{})", rep.backend, pct(rep.overall_rate), rep.successes, rep.total);
    out += "\n";
    return out;
}

}  // namespace rcs::bench
