#pragma once

#include <stdexcept>
#include <string>

namespace alleezone {

// Invalid parameters / violated type invariants.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed in a way that indicates a bug or an
// out-of-contract input (bracketing failures, divergence, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoSignChange : NumericalError {
    using NumericalError::NumericalError;
};

struct NodeCountNonzero : NumericalError {
    using NumericalError::NumericalError;
};

struct ResidualTooLarge : NumericalError {
    using NumericalError::NumericalError;
};

struct NoFormula : NumericalError {
    using NumericalError::NumericalError;
};

struct SingularDenominator : NumericalError {
    using NumericalError::NumericalError;
};

struct StabilityViolation : NumericalError {
    using NumericalError::NumericalError;
};

struct NegativeDensity : NumericalError {
    using NumericalError::NumericalError;
};

struct BelowThreshold : NumericalError {
    using NumericalError::NumericalError;
};

struct NotApplicable : NumericalError {
    using NumericalError::NumericalError;
};

struct NonConvergent : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace alleezone
