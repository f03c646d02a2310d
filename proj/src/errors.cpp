#include "rxval/errors.hpp"

namespace rxval {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonBinaryLabel: return "NonBinaryLabel";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::SingleClass: return "SingleClass";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::IndivisibleFold: return "IndivisibleFold";
        case ErrorKind::InsufficientOppositeClass: return "InsufficientOppositeClass";
        case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::TooFewValues: return "TooFewValues";
        case ErrorKind::InvalidP: return "InvalidP";
        case ErrorKind::DegenerateBalance: return "DegenerateBalance";
        case ErrorKind::MisalignedLabels: return "MisalignedLabels";
        case ErrorKind::Config: return "ConfigError";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

Error::Error(ErrorKind kind, std::string message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(std::move(message)) {}

}  // namespace rxval
