#pragma once

// Experiment drivers behind the rcpd command-line tool. Each command has a
// compute step returning plain data and a writer emitting the CSV artifact,
// so tests can check both without going through the process boundary.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rcpd/fieldmodel.hpp"
#include "rcpd/integrators.hpp"
#include "rcpd/reference.hpp"

namespace rcpd {

inline constexpr const char* kVersion = "0.1.0";

/// Desk-scale default for long runs; the full window is 1e5.
inline constexpr double kDefaultLongrunTauEnd = 1e4;
inline constexpr double kFullLongrunTauEnd = 1e5;
inline constexpr std::int64_t kMaxLongrunSamples = 100000;

/// "%.16e": 17 significant digits, '.' decimal separator.
std::string format_real(double x);

struct RunConfig {
    ProblemId problem = ProblemId::Quadratic;
    MethodId method = MethodId::M1;
    double h = 0.1;
    double tau_end = kDefaultLongrunTauEnd;
    std::int64_t stride = 0;  // 0 selects a stride giving <= kMaxLongrunSamples rows
    double epsilon = kDefaultStrongFieldEpsilon;
    ReferenceOptions ref;

    /// Throws std::invalid_argument on h <= 0, tau_end < h, stride < 0, epsilon <= 0.
    void validate() const;
};

// ---- convergence -----------------------------------------------------------

struct ConvergenceConfig {
    std::vector<ProblemId> problems{ProblemId::Tokamak, ProblemId::Quadratic, ProblemId::NonQuadratic,
                                    ProblemId::ConstB};
    std::vector<MethodId> methods{MethodId::M1, MethodId::M2, MethodId::M3, MethodId::M4};
    std::optional<int> kmin;  // unset: 4 (8 for strongB)
    std::optional<int> kmax;  // unset: 9 (14 for strongB)
    double tau_end = 1.0;
    double epsilon = kDefaultStrongFieldEpsilon;
    ReferenceOptions ref;

    void validate() const;
};

struct ConvergenceRow {
    ProblemId problem{};
    MethodId method{};
    double h = 0.0;
    double error_x = 0.0;
    double error_v = 0.0;
    std::string message;  // non-empty when the run failed
};

struct SlopeRow {
    ProblemId problem{};
    MethodId method{};
    double slope_x = 0.0;
    double slope_v = 0.0;
    std::string message;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::vector<SlopeRow> slopes;
    bool any_failure() const;
};

/// Step exponents used for a problem: h = 2^-k, k in [kmin, kmax].
std::pair<int, int> k_range(const ConvergenceConfig& cfg, ProblemId problem);

ConvergenceTable run_convergence(const ConvergenceConfig& cfg);
void write_convergence_csv(std::ostream& os, const ConvergenceConfig& cfg, const ConvergenceTable& table);

// ---- long runs -------------------------------------------------------------

struct LongrunResult {
    Trajectory trajectory;
    double max_e_H = 0.0;
    double max_e_M = 0.0;
    double drift_e_H = 0.0;  // least-squares slope of |e_H| per unit tau
    double drift_e_M = 0.0;
};

/// Stride actually used: cfg.stride, or the smallest giving <= kMaxLongrunSamples rows.
std::int64_t effective_stride(const RunConfig& cfg);

LongrunResult run_longrun(const RunConfig& cfg);
void write_longrun_csv(std::ostream& os, const RunConfig& cfg, const LongrunResult& result);

// ---- phase-space volume ----------------------------------------------------

struct VolumeConfig {
    ProblemId problem = ProblemId::Quadratic;
    double h = 0.05;
    int n_points = 100;
    std::uint64_t seed = 1;
    double epsilon = kDefaultStrongFieldEpsilon;

    void validate() const;
};

struct VolumeRow {
    int index = 0;
    double det = 0.0;
    double abs_dev = 0.0;
};

/// Seeded phase points around the problem's initial state, on the mass shell.
std::vector<State> volume_points(const Problem& problem, int n_points, std::uint64_t seed);

std::vector<VolumeRow> run_volume(const VolumeConfig& cfg);
void write_volume_csv(std::ostream& os, const VolumeConfig& cfg, const std::vector<VolumeRow>& rows);

// ---- catalog listing -------------------------------------------------------

void write_problem_table(std::ostream& os, double epsilon = kDefaultStrongFieldEpsilon);

}  // namespace rcpd
