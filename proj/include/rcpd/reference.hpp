#pragma once

// Adaptive Dormand-Prince 5(4) solver for the proper-time system, used to
// produce reference solutions for error measurements.

#include <cstdint>
#include <span>
#include <vector>

#include "rcpd/fieldmodel.hpp"
#include "rcpd/lorentz_algebra.hpp"

namespace rcpd {

struct ReferenceOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
};

struct ReferenceStats {
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
};

/// Right-hand side (dx, dtbar, dv, dgamma)/dtau of the real-form system.
std::array<double, 8> proper_time_rhs(const Problem& problem, const std::array<double, 8>& y);

/// Integrates from the problem's initial state to tau_end and returns the final state.
/// Throws StepUnderflow if the step falls below 1e-14 * tau_end, and
/// std::invalid_argument for tolerances outside [1e-14, 1e-6].
State reference_solution(const Problem& problem, double tau_end, ReferenceOptions opts = {},
                         ReferenceStats* stats = nullptr);

/// Same integration, reporting the state at each of `times` (ascending, within
/// (0, tau_end]) through the solver's continuous extension.
std::vector<State> reference_samples(const Problem& problem, std::span<const double> times,
                                     ReferenceOptions opts = {}, ReferenceStats* stats = nullptr);

/// General entry point: integrates `start` over [0, tau_end].
std::vector<State> reference_from(const Problem& problem, const State& start, double tau_end,
                                  std::span<const double> times, ReferenceOptions opts,
                                  ReferenceStats* stats);

}  // namespace rcpd
