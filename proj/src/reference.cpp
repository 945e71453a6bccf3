#include "rcpd/reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rcpd/diagnostics.hpp"
#include "rcpd/errors.hpp"

namespace rcpd {

namespace {

using Y = std::array<double, 8>;

// Dormand-Prince 5(4) tableau (autonomous system, so the nodes c_i are not needed).
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Step-size controller (Hairer's PI variant).
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // hnew >= 0.2 h
constexpr double kFacMax = 10.0;  // hnew <= 10 h
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;

double error_norm(const Y& err, const Y& y0, const Y& y1, double rtol, double atol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double sk = atol + rtol * std::fmax(std::fabs(y0[i]), std::fabs(y1[i]));
        acc += (err[i] / sk) * (err[i] / sk);
    }
    return std::sqrt(acc / 8.0);
}

double initial_step(const Problem& problem, const Y& y0, const Y& f0, double tau_end, double rtol,
                    double atol) {
    double dn0 = 0.0, dn1 = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double sk = atol + rtol * std::fabs(y0[i]);
        dn0 += (y0[i] / sk) * (y0[i] / sk);
        dn1 += (f0[i] / sk) * (f0[i] / sk);
    }
    dn0 = std::sqrt(dn0 / 8.0);
    dn1 = std::sqrt(dn1 / 8.0);
    double h = (dn0 <= 1e-10 || dn1 <= 1e-10) ? 1e-6 : 0.01 * dn0 / dn1;
    h = std::fmin(h, tau_end);
    Y y1;
    for (std::size_t i = 0; i < 8; ++i) y1[i] = y0[i] + h * f0[i];
    const Y f1 = proper_time_rhs(problem, y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double sk = atol + rtol * std::fabs(y0[i]);
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2 / 8.0) / h;
    const double der = std::fmax(std::fabs(der2), dn1);
    const double h1 = der <= 1e-15 ? std::fmax(1e-6, h * 1e-3) : std::pow(0.01 / der, 0.2);
    return std::fmin(std::fmin(100.0 * h, h1), tau_end);
}

}  // namespace

std::array<double, 8> proper_time_rhs(const Problem& problem, const std::array<double, 8>& y) {
    const Vec3 x{y[0], y[1], y[2]};
    const Vec3 v{y[4], y[5], y[6]};
    const double gamma = y[7];
    const FieldSample f = eval_fields(problem, x);
    const Vec3 vxb = cross(v, f.B);
    return {v[0],
            v[1],
            v[2],
            gamma,
            vxb[0] + gamma * f.E[0],
            vxb[1] + gamma * f.E[1],
            vxb[2] + gamma * f.E[2],
            dot(f.E, v)};
}

std::vector<State> reference_from(const Problem& problem, const State& start, double tau_end,
                                  std::span<const double> times, ReferenceOptions opts,
                                  ReferenceStats* stats) {
    const double rtol = opts.rtol, atol = opts.atol;
    if (!(rtol >= 1e-14 && rtol <= 1e-6) || !(atol >= 1e-14 && atol <= 1e-6))
        throw std::invalid_argument("reference tolerances must lie in [1e-14, 1e-6]");
    if (!(tau_end > 0.0) || !std::isfinite(tau_end)) throw std::invalid_argument("tau_end must be positive");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || times[i] > tau_end || (i > 0 && !(times[i] > times[i - 1])))
            throw std::invalid_argument("sample times must be ascending within (0, tau_end]");
    }

    std::vector<State> out;
    out.reserve(times.size());
    std::size_t next_sample = 0;

    Y y = to_phase(start);
    Y comp{};  // Kahan compensation for y
    double t = 0.0;
    Y k1 = proper_time_rhs(problem, y);
    double h = initial_step(problem, y, k1, tau_end, rtol, atol);
    const double h_min = 1e-14 * tau_end;
    double fac_old = 1e-4;
    bool last_rejected = false;
    ReferenceStats local;

    while (t < tau_end) {
        if (h < h_min) {
            std::ostringstream msg;
            msg << "reference solver step " << h << " fell below " << h_min << " at tau = " << t;
            throw StepUnderflow(msg.str());
        }
        bool last = false;
        if (t + h >= tau_end) {
            h = tau_end - t;
            last = true;
        }

        Y tmp, k2, k3, k4, k5, k6, y1, k7;
        for (std::size_t i = 0; i < 8; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        k2 = proper_time_rhs(problem, tmp);
        for (std::size_t i = 0; i < 8; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = proper_time_rhs(problem, tmp);
        for (std::size_t i = 0; i < 8; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = proper_time_rhs(problem, tmp);
        for (std::size_t i = 0; i < 8; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = proper_time_rhs(problem, tmp);
        for (std::size_t i = 0; i < 8; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = proper_time_rhs(problem, tmp);
        Y incr;
        for (std::size_t i = 0; i < 8; ++i) {
            incr[i] = h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            y1[i] = y[i] + incr[i];
        }
        k7 = proper_time_rhs(problem, y1);
        Y err;
        for (std::size_t i = 0; i < 8; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

        const double en = error_norm(err, y, y1, rtol, atol);
        const double fac11 = std::pow(en, kExpo1);
        if (en <= 1.0) {
            ++local.accepted;
            // Continuous extension coefficients on [t, t + h].
            if (next_sample < times.size() && times[next_sample] < t + h) {
                Y r2, r3, r4, r5;
                for (std::size_t i = 0; i < 8; ++i) {
                    r2[i] = y1[i] - y[i];
                    r3[i] = h * k1[i] - r2[i];
                    r4[i] = r2[i] - h * k7[i] - r3[i];
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                 d7 * k7[i]);
                }
                while (next_sample < times.size() && times[next_sample] < t + h) {
                    const double th = (times[next_sample] - t) / h;
                    const double th1 = 1.0 - th;
                    Y ys;
                    for (std::size_t i = 0; i < 8; ++i)
                        ys[i] = y[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
                    out.push_back(from_phase(ys));
                    ++next_sample;
                }
            }
            // Compensated update y += incr.
            for (std::size_t i = 0; i < 8; ++i) {
                const double yi = incr[i] - comp[i];
                const double sum = y[i] + yi;
                comp[i] = (sum - y[i]) - yi;
                y[i] = sum;
            }
            k1 = k7;
            t = last ? tau_end : t + h;
            while (next_sample < times.size() && times[next_sample] <= t) {
                out.push_back(from_phase(y));
                ++next_sample;
            }
            if (last) break;
            double fac = fac11 / std::pow(fac_old, kBeta);
            fac = std::fmax(1.0 / kFacMax, std::fmin(1.0 / kFacMin, fac / kSafety));
            double h_new = h / fac;
            if (last_rejected) h_new = std::fmin(h_new, h);
            fac_old = std::fmax(en, 1e-4);
            last_rejected = false;
            h = h_new;
        } else {
            ++local.rejected;
            h /= std::fmin(1.0 / kFacMin, fac11 / kSafety);
            last_rejected = true;
        }
    }
    if (stats) *stats = local;
    return out;
}

State reference_solution(const Problem& problem, double tau_end, ReferenceOptions opts,
                         ReferenceStats* stats) {
    State s0;
    s0.x = problem.x0;
    s0.tbar = problem.tbar0;
    s0.v = problem.v0;
    s0.gamma = problem.gamma0;
    const double times[] = {tau_end};
    return reference_from(problem, s0, tau_end, times, opts, stats).front();
}

std::vector<State> reference_samples(const Problem& problem, std::span<const double> times,
                                     ReferenceOptions opts, ReferenceStats* stats) {
    if (times.empty()) return {};
    State s0;
    s0.x = problem.x0;
    s0.tbar = problem.tbar0;
    s0.v = problem.v0;
    s0.gamma = problem.gamma0;
    return reference_from(problem, s0, times.back(), times, opts, stats);
}

}  // namespace rcpd
