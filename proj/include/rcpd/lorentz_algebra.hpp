#pragma once

// Real-form field matrices and their closed-form analytic functions.
//
// The generator of the momentum rotation acting on u = (v, gamma) is
//
//     G = [[Bx, E], [E^T, 0]],   Bx a = a x B,
//
// and its companion is Ghat = [[Ex, -B], [-B^T, 0]], Ex a = a x E. With
// r1 = |E|^2 - |B|^2 and r2 = -E.B they satisfy
//
//     G^3 = r1 G + r2 Ghat,   G Ghat = r2 I,
//
// so every analytic f(sG) collapses to a combination of I, G, G^2 and Ghat
// with scalar coefficients. Those coefficients are written through the two
// roots lambda1 = (r1 + d)/2 >= 0 and lambda2 = (r1 - d)/2 <= 0,
// d = sqrt(r1^2 + 4 r2^2): hyperbolic functions on the lambda1 branch,
// trigonometric ones on the lambda2 branch.
//
// G is skew with respect to M = diag(1,1,1,-1), hence exp(sG) preserves
// |v|^2 - gamma^2.

#include "rcpd/fieldmodel.hpp"
#include "rcpd/linalg.hpp"

namespace rcpd {

/// Phase point in real variables: lab time tbar and relativistic factor gamma
/// stand in for the imaginary Minkowski coordinates t = i tbar, w = i gamma.
struct State {
    Vec3 x{};
    double tbar = 0.0;
    Vec3 v{};
    double gamma = 1.0;
};

/// Position part (x, tbar) packed as a 4-vector.
inline Vec4 position4(const State& s) { return {s.x[0], s.x[1], s.x[2], s.tbar}; }
/// Momentum part (v, gamma) packed as a 4-vector.
inline Vec4 momentum4(const State& s) { return {s.v[0], s.v[1], s.v[2], s.gamma}; }

inline Vec3 head3(const Vec4& a) { return {a[0], a[1], a[2]}; }

struct KernelCoeffs {
    double r1 = 0.0, r2 = 0.0;
    double d = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    double s = 0.0;
    double K1 = 0.0;  // tanh(sG) = K1 G + K2 Ghat
    double K2 = 0.0;
    double K3 = 1.0;  // sech(sG) = K3 I + K4 G^2
    double K4 = 0.0;
};

struct ExpCoeffs {
    double chi1 = 1.0;  // exp(sG) = chi1 I + sigma1 G + chi2 G^2 + sigma2 Ghat
    double sigma1 = 0.0;
    double chi2 = 0.0;
    double sigma2 = 0.0;
};

/// Roots of mu^2 - r1 mu - r2^2, computed without cancellation.
struct InvariantRoots {
    double d = 0.0;
    double lambda1 = 0.0;  // >= 0
    double lambda2 = 0.0;  // <= 0
};
InvariantRoots invariant_roots(double r1, double r2);

/// Matrix a -> a x w.
Mat<3> cross_matrix(const Vec3& w);

Mat4 build_F(const FieldSample& s);
Mat4 build_Fhat(const FieldSample& s);

/// Pole guard on s*sqrt(-lambda2) relative to pi/2.
inline constexpr double kPoleMargin = 1e-3;

/// Coefficients of tanh(sG) and sech(sG). Throws PoleProximity when
/// |s|*sqrt(-lambda2) >= pi/2 - kPoleMargin. Odd/even in s, so negative
/// arguments are accepted (backward integration).
KernelCoeffs kernel_coeffs(double r1, double r2, double s);

/// Coefficients of exp(sG); entire in s.
ExpCoeffs exp_coeffs(double r1, double r2, double s);

/// tanh((h/2) G) and sech((h/2) G).
Mat4 mat_tanh_half(const FieldSample& s, double h);
Mat4 mat_sech_half(const FieldSample& s, double h);

/// exp(step * G).
Mat4 mat_exp(const FieldSample& s, double step);

}  // namespace rcpd
