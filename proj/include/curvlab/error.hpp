#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvlab {

enum class ErrorCode {
    NonConvergent,
    DomainEdge,
    NoBracket,
    WrongKind,
    OutOfRange,
    GridTooCoarse,
    InvalidInput,
    IoError,
    SchemaMismatch,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code tells callers which
/// recovery applies (widen tolerance, fix input, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace curvlab
