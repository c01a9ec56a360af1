#pragma once

#include <optional>
#include <type_traits>

#include "rcs/error.hpp"

namespace rcs::llm {

inline constexpr int kDefaultMaxRetries = 3;

// Calls attempt() up to 1 + max_retries times and returns the first success.
// Only rcs::Error is retried; the last one is rethrown on exhaustion.
template <class Attempt>
auto with_retry(Attempt&& attempt, int max_retries) -> std::invoke_result_t<Attempt&> {
    if (max_retries < 0) throw Error(ErrorCode::Malformed, "max_retries must be >= 0");
    std::optional<Error> last;
    for (int i = 0; i <= max_retries; ++i) {
        try {
            return attempt();
        } catch (const Error& e) {
            last = e;
        }
    }
    throw *last;
}

}  // namespace rcs::llm
