#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcs {

enum class ErrorCode {
    IndexMismatch,
    UnknownStatus,
    Malformed,
    UnknownCommand,
    ArgOutOfRange,
    Transport,
    ReplayExhausted,
    PolicyUnknown,
    SchemaError,
    OverlapError,
    InvalidCommand,
    ConnectionClosed,
    TopicPayloadMismatch,
    Timeout,
    Protocol,
    CountError,
    Io,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the whole library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rcs
