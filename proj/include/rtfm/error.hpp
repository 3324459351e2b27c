#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rtfm {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCode : std::uint8_t {
    invalid_argument = 1,
    io = 2,
    parse = 3,
    schema = 4,
    not_found = 5,
    format = 6,
    domain = 7,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code)
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by ingestion; carries the 1-based line number when known (0 otherwise).
class RecordError : public Error {
public:
    RecordError(ErrorCode code, const std::string& message, std::size_t line = 0)
        : Error(code, line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line)
    {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace rtfm
