#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csplab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CSPLAB_DEFINE_ERROR(Name)              \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    }

CSPLAB_DEFINE_ERROR(SignatureMismatch);
CSPLAB_DEFINE_ERROR(BudgetExceeded);
CSPLAB_DEFINE_ERROR(ParameterError);
CSPLAB_DEFINE_ERROR(DomainMismatch);
CSPLAB_DEFINE_ERROR(ClassMismatch);
CSPLAB_DEFINE_ERROR(MalformedPattern);
CSPLAB_DEFINE_ERROR(UnknownVariable);
CSPLAB_DEFINE_ERROR(NotFree);
CSPLAB_DEFINE_ERROR(PreconditionFailed);
CSPLAB_DEFINE_ERROR(ShapeUnsupported);
CSPLAB_DEFINE_ERROR(ArityMismatch);
CSPLAB_DEFINE_ERROR(UnsupportedBase);
CSPLAB_DEFINE_ERROR(ArityError);

#undef CSPLAB_DEFINE_ERROR

/// Text-format error carrying a 1-based source position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace csplab
