#pragma once

#include <stdexcept>
#include <string>

namespace modalnf {

// Base for every error the library raises. `kind()` is a stable identifier
// used in machine-readable error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define MODALNF_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    };

MODALNF_DEFINE_ERROR(MissingMode)
MODALNF_DEFINE_ERROR(ModelMismatch)
MODALNF_DEFINE_ERROR(InvalidTerm)
MODALNF_DEFINE_ERROR(UnclassifiableMode)
MODALNF_DEFINE_ERROR(ModelInvariantViolation)
MODALNF_DEFINE_ERROR(OrderViolation)
MODALNF_DEFINE_ERROR(ZeroDivisor)
MODALNF_DEFINE_ERROR(SmallDivisor)
MODALNF_DEFINE_ERROR(ResidualOrderViolation)
MODALNF_DEFINE_ERROR(UpdateIdentityViolation)
MODALNF_DEFINE_ERROR(GapViolation)
MODALNF_DEFINE_ERROR(NotQuadraticConvolution)
MODALNF_DEFINE_ERROR(NonFinite)
MODALNF_DEFINE_ERROR(InsideViolation)

#undef MODALNF_DEFINE_ERROR

// Parse errors carry the offending line (1-based, 0 when not applicable).
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("ParseError", line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace modalnf
