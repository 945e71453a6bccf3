#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rcpd {

/// Base for every failure caused by the numerics (as opposed to bad usage).
/// The harness maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}

    /// Step index at which the failure happened, when raised from a driver loop.
    std::optional<std::int64_t> step;
};

/// tan/sec branch of a kernel coefficient is too close to its pole:
/// the step is too large for the local field strength.
class PoleProximity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The implicit 4x4 system of a two-step method is singular to working precision.
class SingularStep : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The adaptive reference solver drove its step below the underflow guard.
class StepUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A reference vector has (numerically) zero norm, so a relative error is undefined.
class DegenerateReference : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A field was evaluated where it is singular (tokamak axis R = 0).
class FieldDomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace rcpd
