#pragma once

// Two-step symmetric integrators M1..M4 for the proper-time system
//
//     dx/dtau = v,  dtbar/dtau = gamma,  dv/dtau = v x B + gamma E,  dgamma/dtau = E.v
//
// M1 is the Strang splitting of the momentum rotation and the free drift,
// run in its explicit one-step form. M2..M4 are genuinely two-step schemes
// on the position pair z = (x, tbar), solved per step as a 4x4 linear system,
// with the momentum reconstructed from the central difference of z.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rcpd/fieldmodel.hpp"
#include "rcpd/lorentz_algebra.hpp"

namespace rcpd {

enum class MethodId { M1, M2, M3, M4 };

std::string_view method_name(MethodId m);
std::optional<MethodId> parse_method(std::string_view name);
std::vector<MethodId> all_methods();

/// The starting value z1 = z0 + h exp((h/2) G(x0)) u0.
Vec4 start_step(const Problem& problem, const State& s0, double h);

/// Pole guard applied pointwise at x for the tanh/sech kernel at argument h/2.
void check_kernel_pole(const FieldSample& fields, double h);

/// One explicit M1 step:
///   z' = z + h exp((h/2) G(x)) u,   u' = exp((h/2) G(x')) exp((h/2) G(x)) u.
/// The map itself is defined for every h; `integrate` additionally applies
/// check_kernel_pole at each x_n.
State m1_step(const Problem& problem, const State& s, double h);

/// Residual of the tanh two-step relation satisfied by consecutive M1 positions:
///   (z+ - 2z + z-)/h^2 - (2/h) tanh((h/2) G(x)) (z+ - z-)/(2h).
/// Returns its max-norm.
double m1_two_step_residual(const Problem& problem, const Vec4& z_prev, const Vec4& z_curr,
                            const Vec4& z_next, double h);

/// Coefficients frozen at x0 for the whole run (M2..M4).
struct FrozenCoeffs {
    double S1 = 0.0;
    double S2 = 0.0;
    double S3 = 1.0;
    double S4 = 0.0;
    Vec3 B0{};
};

FrozenCoeffs frozen_coeffs(const Problem& problem, MethodId method, const Vec3& x0, double h);

struct TwoStepResult {
    Vec4 z_next{};
    Vec4 u_curr{};  // momentum reconstructed at the middle point
};

/// M2..M4. The frozen coefficients are fixed at construction; a different
/// step size needs a new instance. Negative h runs the scheme backwards with
/// the same x0 (the frozen coefficients are odd/even in h).
class TwoStepMethod {
public:
    TwoStepMethod(const Problem& problem, MethodId method, double h, const Vec3& x0_frozen);

    MethodId method() const { return method_; }
    double h() const { return h_; }
    const FrozenCoeffs& frozen() const { return frozen_; }

    /// The matrix A of (I - A) z+ = 2 z - (I + A) z-, assembled with fields at x_n.
    Mat4 system_matrix(const FieldSample& at_xn) const;

    /// Momentum at step n from the central difference of (z-, z+).
    Vec4 momentum(const FieldSample& at_xn, const Vec4& z_prev, const Vec4& z_next) const;

    /// Solves for z_{n+1}; throws SingularStep on a vanishing pivot.
    TwoStepResult step(const Vec4& z_prev, const Vec4& z_curr) const;

private:
    Problem problem_;
    MethodId method_;
    double h_;
    FrozenCoeffs frozen_;
};

/// Smallest pivot accepted by the 4x4 solve.
inline constexpr double kSingularPivot = 1e-14;

struct Sample {
    double tau = 0.0;
    State state;
    double e_H = 0.0;  // relative energy error
    double e_M = 0.0;  // relative mass-shell error
};

struct Trajectory {
    MethodId method = MethodId::M1;
    double h = 0.0;
    std::int64_t steps = 0;  // N, so the last sample sits at tau = N h
    std::int64_t stride = 1;
    std::vector<Sample> samples;
    double max_e_H = 0.0;  // over every step, not only recorded samples
    double max_e_M = 0.0;
    State final_state;
};

/// Runs N = round(tau_end/h) steps and records every `stride`-th step plus the last.
/// M2..M4 advance one step past N to reconstruct the final momentum.
Trajectory integrate(const Problem& problem, MethodId method, double h, double tau_end,
                     std::int64_t stride = 1);

}  // namespace rcpd
