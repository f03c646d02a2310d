#pragma once

#include <stdexcept>
#include <string>

namespace rxval {

enum class ErrorKind {
    NonBinaryLabel,
    ShapeMismatch,
    SingleClass,
    TooFewSamples,
    IndivisibleFold,
    InsufficientOppositeClass,
    EmptyTrainingSet,
    NonConvergence,
    DimensionMismatch,
    ZeroVariance,
    TooFewValues,
    InvalidP,
    DegenerateBalance,
    MisalignedLabels,
    Config,
    Io,
};

const char* to_string(ErrorKind kind);

// Domain error carrying the contract's error name. The CLI maps Io to
// exit code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message);

    ErrorKind kind() const noexcept { return kind_; }
    const char* name() const noexcept { return to_string(kind_); }
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace rxval
