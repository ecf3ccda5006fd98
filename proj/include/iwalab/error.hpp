#pragma once

#include <stdexcept>
#include <string>

namespace iwalab {

enum class Errc {
    NotAUnit,
    MixedContext,
    NotSquare,
    DivisorDivisibleByP,
    PrecisionExhausted,
    ZeroToPrecision,
    TailUncertified,
    ZeroDeterminant,
    BudgetExhausted,
    SizeCapExceeded,
    InvalidArgument,
    ParseError,
    ValidationError,
    CommandMismatch,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (CLI, Python) can map it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace iwalab
