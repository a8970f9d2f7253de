#pragma once

#include <stdexcept>
#include <string>

namespace specdiag {

/// Error kinds shared across the library. Each operation documents which
/// kinds it can raise; the CLI maps them onto exit codes.
enum class Errc {
    NegativeEntry,
    InsufficientSupport,
    UnsupportedTail,
    NotNonincreasing,
    IncompatibleTails,
    UndecidableDepth,
    LengthMismatch,
    OutOfRange,
    Infeasible,
    NotMajorized,
    SearchExhausted,
    NotInteger,
    NoConvergence,
    DimensionMismatch,
    NotUnitary,
    PatternMismatch,
    CaseMismatch,
    OracleViolation,
    ParseError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace specdiag
