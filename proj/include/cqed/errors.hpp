// Exception hierarchy shared by all solver modules.
#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

// Base class for every error raised by the library. CLI maps these to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid physical input (bad parameters, malformed scenario content).
struct InputError : Error {
    using Error::Error;
};

// A numerical routine failed to converge or met a degenerate configuration.
struct SolverError : Error {
    using Error::Error;
};

struct NonPositiveEnergy : InputError {
    using InputError::InputError;
};
struct OutOfRangePosition : InputError {
    using InputError::InputError;
};
struct NonPositiveEntry : InputError {
    using InputError::InputError;
};
struct DimensionMismatch : InputError {
    using InputError::InputError;
};
struct TruncationTooSmall : InputError {
    using InputError::InputError;
};
struct UnboundedInitialCondition : InputError {
    using InputError::InputError;
};
struct NonProductState : InputError {
    using InputError::InputError;
};
struct OnResonance : InputError {
    using InputError::InputError;
};

struct RootBracketFailure : SolverError {
    using SolverError::SolverError;
};
struct NewtonDiverged : SolverError {
    using SolverError::SolverError;
};
struct RootCollision : SolverError {
    using SolverError::SolverError;
};
struct MisclassifiedPole : SolverError {
    using SolverError::SolverError;
};
struct PoleProximity : SolverError {
    using SolverError::SolverError;
};
struct BarePoleProximity : SolverError {
    using SolverError::SolverError;
};
struct DegeneratePole : SolverError {
    using SolverError::SolverError;
};
struct NonPositiveEigenvalue : SolverError {
    using SolverError::SolverError;
};
struct SumNotConverged : SolverError {
    using SolverError::SolverError;
};
struct SeriesNotConverged : SolverError {
    using SolverError::SolverError;
};
struct StepUnstable : SolverError {
    using SolverError::SolverError;
};
struct IntegralDiverges : SolverError {
    using SolverError::SolverError;
};

}  // namespace cqed
