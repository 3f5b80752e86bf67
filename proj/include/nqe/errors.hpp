#pragma once

#include <stdexcept>
#include <string>

namespace nqe {

// Library errors are exceptions with stable names; the CLI maps them to
// exit code 1 (numeric/convergence failure) vs 2 (usage).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct OverflowDomain : Error { using Error::Error; };
struct NonFiniteState : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct DegenerateGrid : Error { using Error::Error; };
struct NormalizationFailure : Error { using Error::Error; };
struct DegenerateCdf : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct AllRealizationsDiverged : Error { using Error::Error; };
struct NonFiniteGradient : Error { using Error::Error; };
struct EmptyValidation : Error { using Error::Error; };
struct CollapseError : Error { using Error::Error; };
struct NoFeasibleFactor : Error { using Error::Error; };
struct InsufficientValidation : Error { using Error::Error; };
struct ChecksumMismatch : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace nqe
