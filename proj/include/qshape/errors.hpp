#pragma once

#include <stdexcept>
#include <string>

namespace qshape {

// Base of the domain error hierarchy. kind() is a stable machine-readable
// tag used by the CLI error document; what() carries the human message.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const noexcept { return "Error"; }
};

#define QSHAPE_DEFINE_ERROR(NAME)                                          \
    class NAME : public Error {                                            \
    public:                                                                \
        explicit NAME(const std::string& msg) : Error(msg) {}              \
        const char* kind() const noexcept override { return #NAME; }       \
    }

QSHAPE_DEFINE_ERROR(DegenerateConfig);
QSHAPE_DEFINE_ERROR(TooFewPoints);
QSHAPE_DEFINE_ERROR(TooManyPoints);
QSHAPE_DEFINE_ERROR(DimensionMismatch);
QSHAPE_DEFINE_ERROR(NotATriangle);
QSHAPE_DEFINE_ERROR(IndexOutOfRange);
QSHAPE_DEFINE_ERROR(ZeroVector);
QSHAPE_DEFINE_ERROR(EmptySupport);
QSHAPE_DEFINE_ERROR(NotCyclic);
QSHAPE_DEFINE_ERROR(NormLoss);
QSHAPE_DEFINE_ERROR(InvalidParams);
QSHAPE_DEFINE_ERROR(IoError);

#undef QSHAPE_DEFINE_ERROR

// Carries the 1-based line number where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    const char* kind() const noexcept override { return "ParseError"; }
    long line() const noexcept { return line_; }

private:
    long line_;
};

} // namespace qshape
