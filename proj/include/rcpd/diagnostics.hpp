#pragma once

// Conserved quantities, error norms and order/drift fits.

#include <cstdint>
#include <span>
#include <vector>

#include "rcpd/fieldmodel.hpp"
#include "rcpd/lorentz_algebra.hpp"

namespace rcpd {

/// H = gamma + U(x).
double energy(const Problem& problem, const Vec3& x, double gamma);

/// (|v|^2 - gamma^2) / 2; equals -1/2 on physical data.
double mass_shell(const Vec3& v, double gamma);

struct RelativeErrors {
    double error_x = 0.0;
    double error_v = 0.0;
};

/// |x - x_ref|/|x_ref| and |v - v_ref|/|v_ref|. Throws DegenerateReference
/// when a reference norm is below 1e-300.
RelativeErrors relative_errors(const State& numeric, const State& reference);

/// Least-squares slope of log(error) against log(h). Needs >= 3 positive pairs.
double fit_order(std::span<const double> hs, std::span<const double> errors);

struct ConservationSeries {
    std::vector<double> times;
    std::vector<double> e_H;
    std::vector<double> e_M;
};

/// Least-squares slope of |series| against time. Needs >= 10 points.
double drift_slope(std::span<const double> times, std::span<const double> values);

/// Packs (x, tbar, v, gamma) as the 8-dimensional phase point.
using Phase8 = std::array<double, 8>;
Phase8 to_phase(const State& s);
State from_phase(const Phase8& p);

/// Relative perturbation used by the finite-difference Jacobian.
inline constexpr double kJacobianPerturbation = 1e-6;

/// Determinant of the 8x8 Jacobian of the M1 one-step map at `point`,
/// from central differences.
double volume_jacobian_det(const Problem& problem, const State& point, double h);

}  // namespace rcpd
