#include "rcpd/integrators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rcpd/diagnostics.hpp"
#include "rcpd/errors.hpp"

namespace rcpd {

std::string_view method_name(MethodId m) {
    switch (m) {
        case MethodId::M1: return "M1";
        case MethodId::M2: return "M2";
        case MethodId::M3: return "M3";
        case MethodId::M4: return "M4";
    }
    return "unknown";
}

std::optional<MethodId> parse_method(std::string_view name) {
    for (MethodId m : all_methods())
        if (method_name(m) == name) return m;
    return std::nullopt;
}

std::vector<MethodId> all_methods() { return {MethodId::M1, MethodId::M2, MethodId::M3, MethodId::M4}; }

namespace {

Vec4 add_scaled(const Vec4& a, double s, const Vec4& b) {
    return {a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]};
}

State make_state(const Vec4& z, const Vec4& u) {
    State s;
    s.x = head3(z);
    s.tbar = z[3];
    s.v = head3(u);
    s.gamma = u[3];
    return s;
}

}  // namespace

Vec4 start_step(const Problem& problem, const State& s0, double h) {
    const Mat4 rot = mat_exp(eval_fields(problem, s0.x), 0.5 * h);
    return add_scaled(position4(s0), h, rot * momentum4(s0));
}

void check_kernel_pole(const FieldSample& fields, double h) {
    const auto inv = lorentz_invariants(fields);
    const double arg = 0.5 * std::fabs(h) * std::sqrt(-invariant_roots(inv.r1, inv.r2).lambda2);
    if (arg >= 0.5 * std::numbers::pi - kPoleMargin) {
        std::ostringstream msg;
        msg << "step h = " << h << " puts the tanh/sech kernel argument " << arg
            << " within " << kPoleMargin << " of pi/2";
        throw PoleProximity(msg.str());
    }
}

State m1_step(const Problem& problem, const State& s, double h) {
    const FieldSample here = eval_fields(problem, s.x);
    const Vec4 half_kick = mat_exp(here, 0.5 * h) * momentum4(s);
    const Vec4 z_next = add_scaled(position4(s), h, half_kick);
    const Vec4 u_next = mat_exp(eval_fields(problem, head3(z_next)), 0.5 * h) * half_kick;
    return make_state(z_next, u_next);
}

double m1_two_step_residual(const Problem& problem, const Vec4& z_prev, const Vec4& z_curr,
                            const Vec4& z_next, double h) {
    const Mat4 th = mat_tanh_half(eval_fields(problem, head3(z_curr)), h);
    Vec4 central;
    for (int i = 0; i < 4; ++i) central[i] = (z_next[i] - z_prev[i]) / (2.0 * h);
    const Vec4 rhs = th * central;
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double lhs = (z_next[i] - 2.0 * z_curr[i] + z_prev[i]) / (h * h);
        worst = std::fmax(worst, std::fabs(lhs - (2.0 / h) * rhs[i]));
    }
    return worst;
}

FrozenCoeffs frozen_coeffs(const Problem& problem, MethodId method, const Vec3& x0, double h) {
    const FieldSample f0 = eval_fields(problem, x0);
    FrozenCoeffs c;
    c.B0 = f0.B;
    switch (method) {
        case MethodId::M1:
            throw std::invalid_argument("M1 has no frozen coefficients");
        case MethodId::M2: {
            const auto inv = lorentz_invariants(f0);
            const KernelCoeffs k = kernel_coeffs(inv.r1, inv.r2, 0.5 * h);
            c.S1 = k.K1;
            c.S2 = k.K2;
            c.S3 = k.K3;
            c.S4 = k.K4;
            break;
        }
        case MethodId::M3: {
            const auto inv = lorentz_invariants(f0);
            const KernelCoeffs k = kernel_coeffs(inv.r1, inv.r2, 0.5 * h);
            c.S1 = k.K1;
            c.S3 = k.K3;
            break;
        }
        case MethodId::M4:
            c.S1 = 0.5 * h;
            break;
    }
    return c;
}

TwoStepMethod::TwoStepMethod(const Problem& problem, MethodId method, double h, const Vec3& x0_frozen)
    : problem_(problem), method_(method), h_(h) {
    if (method == MethodId::M1) throw std::invalid_argument("TwoStepMethod handles M2, M3 and M4 only");
    if (!(h != 0.0) || !std::isfinite(h)) throw std::invalid_argument("step size must be finite and nonzero");
    frozen_ = frozen_coeffs(problem, method, x0_frozen, h);
}

Mat4 TwoStepMethod::system_matrix(const FieldSample& at_xn) const {
    // S1 G(x_n) + S2 [[Ex(x_n), -B0], [-B0^T, 0]]
    Mat4 a = frozen_.S1 * build_F(at_xn);
    if (frozen_.S2 != 0.0) {
        FieldSample mixed = at_xn;
        mixed.B = frozen_.B0;
        Mat4 hat = build_Fhat(mixed);
        a += frozen_.S2 * hat;
    }
    return a;
}

Vec4 TwoStepMethod::momentum(const FieldSample& at_xn, const Vec4& z_prev, const Vec4& z_next) const {
    Vec4 central;
    for (int i = 0; i < 4; ++i) central[i] = (z_next[i] - z_prev[i]) / (2.0 * h_);
    Vec4 u;
    for (int i = 0; i < 4; ++i) u[i] = frozen_.S3 * central[i];
    if (frozen_.S4 != 0.0) {
        const Mat4 g = build_F(at_xn);
        const Vec4 g2c = g * (g * central);
        for (int i = 0; i < 4; ++i) u[i] += frozen_.S4 * g2c[i];
    }
    return u;
}

TwoStepResult TwoStepMethod::step(const Vec4& z_prev, const Vec4& z_curr) const {
    const FieldSample here = eval_fields(problem_, head3(z_curr));
    const Mat4 a = system_matrix(here);
    const LU<4> lu(Mat4::identity() - a);
    if (lu.min_pivot < kSingularPivot) {
        std::ostringstream msg;
        msg << "I - A is singular to working precision (pivot " << lu.min_pivot << ", h = " << h_ << ")";
        throw SingularStep(msg.str());
    }
    const Vec4 a_prev = (Mat4::identity() + a) * z_prev;
    Vec4 rhs;
    for (int i = 0; i < 4; ++i) rhs[i] = 2.0 * z_curr[i] - a_prev[i];
    TwoStepResult out;
    out.z_next = lu.solve(rhs);
    out.u_curr = momentum(here, z_prev, out.z_next);
    return out;
}

namespace {

class Recorder {
public:
    Recorder(const Problem& problem, const State& s0, Trajectory& traj)
        : problem_(problem), traj_(traj) {
        H0_ = energy(problem, s0.x, s0.gamma);
        M0_ = mass_shell(s0.v, s0.gamma);
    }

    void observe(std::int64_t n, const State& s) {
        const double eH = std::fabs(energy(problem_, s.x, s.gamma) - H0_) / std::fabs(H0_);
        const double eM = std::fabs(mass_shell(s.v, s.gamma) - M0_) / std::fabs(M0_);
        traj_.max_e_H = std::fmax(traj_.max_e_H, eH);
        traj_.max_e_M = std::fmax(traj_.max_e_M, eM);
        if (n % traj_.stride == 0 || n == traj_.steps)
            traj_.samples.push_back({static_cast<double>(n) * traj_.h, s, eH, eM});
        if (n == traj_.steps) traj_.final_state = s;
    }

private:
    const Problem& problem_;
    Trajectory& traj_;
    double H0_ = 0.0;
    double M0_ = 0.0;
};

State initial_state(const Problem& p) {
    State s;
    s.x = p.x0;
    s.tbar = p.tbar0;
    s.v = p.v0;
    s.gamma = p.gamma0;
    return s;
}

}  // namespace

Trajectory integrate(const Problem& problem, MethodId method, double h, double tau_end,
                     std::int64_t stride) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h must be positive");
    if (!(tau_end > 0.0) || !std::isfinite(tau_end)) throw std::invalid_argument("tau_end must be positive");
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (h > tau_end) throw std::invalid_argument("h must not exceed tau_end");
    const double ratio = tau_end / h;
    const auto steps = static_cast<std::int64_t>(std::llround(ratio));
    if (steps < 1) throw std::invalid_argument("h must not exceed tau_end");

    Trajectory traj;
    traj.method = method;
    traj.h = h;
    traj.steps = steps;
    traj.stride = stride;
    traj.samples.reserve(static_cast<std::size_t>(steps / stride + 2));

    const State s0 = initial_state(problem);
    Recorder rec(problem, s0, traj);
    rec.observe(0, s0);

    std::int64_t n = 0;
    try {
        if (method == MethodId::M1) {
            Vec4 z = position4(s0);
            Vec4 u = momentum4(s0);
            FieldSample here = eval_fields(problem, s0.x);
            Mat4 rot_here = mat_exp(here, 0.5 * h);
            for (n = 0; n < steps; ++n) {
                check_kernel_pole(here, h);
                const Vec4 half_kick = rot_here * u;
                z = add_scaled(z, h, half_kick);
                here = eval_fields(problem, head3(z));
                rot_here = mat_exp(here, 0.5 * h);
                u = rot_here * half_kick;
                rec.observe(n + 1, make_state(z, u));
            }
        } else {
            const TwoStepMethod scheme(problem, method, h, s0.x);
            Vec4 z_prev = position4(s0);
            Vec4 z_curr = start_step(problem, s0, h);
            for (n = 1; n <= steps; ++n) {
                const TwoStepResult r = scheme.step(z_prev, z_curr);
                rec.observe(n, make_state(z_curr, r.u_curr));
                z_prev = z_curr;
                z_curr = r.z_next;
            }
        }
    } catch (NumericalError& e) {
        if (!e.step) e.step = n;
        throw;
    }
    return traj;
}

}  // namespace rcpd
