#pragma once

#include <stdexcept>
#include <string>

namespace qcx {

// Base for all library errors; `code()` is the stable machine-readable name
// surfaced in CLI error documents.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define QCX_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& message)                     \
            : Error(#Name, message) {}                                \
    }

QCX_DEFINE_ERROR(ShapeMismatch);
QCX_DEFINE_ERROR(StepOutOfRange);
QCX_DEFINE_ERROR(NotAComplex);
QCX_DEFINE_ERROR(NotAnEndomorphism);
QCX_DEFINE_ERROR(ZeroCovector);
QCX_DEFINE_ERROR(UnsupportedDimension);
QCX_DEFINE_ERROR(ParseError);
QCX_DEFINE_ERROR(NotClosedSurface);
QCX_DEFINE_ERROR(NotOrientable);
QCX_DEFINE_ERROR(InvalidInput);

#undef QCX_DEFINE_ERROR

} // namespace qcx
