#include "rcs/core/memory.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "rcs/error.hpp"

namespace rcs {

MemoryLog MemoryLog::append(Round round) const {
    if (round.index < 0 || static_cast<std::size_t>(round.index) != size_) {
        throw Error(ErrorCode::IndexMismatch, fmt::format("expected round {}, got {}", size_, round.index));
    }
    if (round.action.has_value() != round.exec_result.has_value()) {
        throw Error(ErrorCode::Malformed, "round action and exec_result must be present together");
    }
    auto next = rounds_ ? std::make_shared<std::vector<Round>>(*rounds_) : std::make_shared<std::vector<Round>>();
    next->push_back(std::move(round));
    MemoryLog out;
    out.size_ = next->size();
    out.rounds_ = std::move(next);
    return out;
}

std::span<const Round> MemoryLog::rounds() const noexcept {
    if (!rounds_) return {};
    return {rounds_->data(), rounds_->size()};
}

bool MemoryLog::operator==(const MemoryLog& other) const {
    auto a = rounds();
    auto b = other.rounds();
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

MemoryLog append_round(const MemoryLog& log, Round round) { return log.append(std::move(round)); }

std::string render_memory(const MemoryLog& log, std::size_t k) {
    const std::size_t n = log.size();
    const std::size_t first = n - std::min(k, n);
    std::string out;
    for (std::size_t i = first; i < n; ++i) {
        const Round& r = log[i];
        out += fmt::format("[round {}] status={}\n", r.index, status_token(r.status));
        out += fmt::format("comment: {}\n", r.comment);
        out += fmt::format("action: {}\n", r.action ? describe(*r.action) : "none");
        if (r.exec_result) {
            const ExecResult& e = *r.exec_result;
            out += fmt::format("result: {} travelled={:.3f} m heading_change={:+.1f} deg clearance={:.3f} m\n",
                               outcome_name(e.outcome), e.distance_travelled, e.heading_change,
                               e.sensor_after.ultrasonic_clearance);
        } else {
            out += "result: none\n";
        }
    }
    return out;
}

}  // namespace rcs
