#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rcs/core/types.hpp"

namespace rcs {

// Append-only round history. Values are immutable; append returns a new log and
// leaves the receiver untouched, so copies can cross threads freely.
class MemoryLog {
public:
    MemoryLog() = default;

    // Throws IndexMismatch unless round.index == size().
    [[nodiscard]] MemoryLog append(Round round) const;

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    const Round& operator[](std::size_t i) const { return (*rounds_)[i]; }
    const Round& back() const { return rounds_->back(); }
    std::span<const Round> rounds() const noexcept;

    bool operator==(const MemoryLog& other) const;

private:
    std::shared_ptr<const std::vector<Round>> rounds_;
    std::size_t size_ = 0;
};

MemoryLog append_round(const MemoryLog& log, Round round);

// Most recent min(k, size) rounds, oldest first, one "[round N]" header each.
std::string render_memory(const MemoryLog& log, std::size_t k);

}  // namespace rcs
