#include "rtfm/error.hpp"

namespace rtfm {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument:
        return "invalid argument";
    case ErrorCode::io:
        return "i/o error";
    case ErrorCode::parse:
        return "parse error";
    case ErrorCode::schema:
        return "schema error";
    case ErrorCode::not_found:
        return "not found";
    case ErrorCode::format:
        return "format error";
    case ErrorCode::domain:
        return "domain error";
    }
    return "unknown error";
}

}  // namespace rtfm
