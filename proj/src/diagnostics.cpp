#include "rcpd/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "rcpd/errors.hpp"
#include "rcpd/integrators.hpp"

namespace rcpd {

double energy(const Problem& problem, const Vec3& x, double gamma) {
    return gamma + eval_fields(problem, x).U;
}

double mass_shell(const Vec3& v, double gamma) { return 0.5 * (dot(v, v) - gamma * gamma); }

RelativeErrors relative_errors(const State& numeric, const State& reference) {
    const double nx = norm(reference.x);
    const double nv = norm(reference.v);
    if (nx < 1e-300) throw DegenerateReference("reference position has zero norm");
    if (nv < 1e-300) throw DegenerateReference("reference momentum has zero norm");
    return {norm(numeric.x - reference.x) / nx, norm(numeric.v - reference.v) / nv};
}

namespace {

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("abscissae are all equal");
    return sxy / sxx;
}

}  // namespace

double fit_order(std::span<const double> hs, std::span<const double> errors) {
    if (hs.size() != errors.size()) throw std::invalid_argument("fit_order: size mismatch");
    if (hs.size() < 3) throw std::invalid_argument("fit_order: need at least 3 points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0) || !(errors[i] > 0.0))
            throw std::invalid_argument("fit_order: step sizes and errors must be positive");
        lx.push_back(std::log(hs[i]));
        ly.push_back(std::log(errors[i]));
    }
    return least_squares_slope(lx, ly);
}

double drift_slope(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) throw std::invalid_argument("drift_slope: size mismatch");
    if (times.size() < 10) throw std::invalid_argument("drift_slope: need at least 10 points");
    std::vector<double> mag(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) mag[i] = std::fabs(values[i]);
    return least_squares_slope(times, mag);
}

Phase8 to_phase(const State& s) {
    return {s.x[0], s.x[1], s.x[2], s.tbar, s.v[0], s.v[1], s.v[2], s.gamma};
}

State from_phase(const Phase8& p) {
    State s;
    s.x = {p[0], p[1], p[2]};
    s.tbar = p[3];
    s.v = {p[4], p[5], p[6]};
    s.gamma = p[7];
    return s;
}

double volume_jacobian_det(const Problem& problem, const State& point, double h) {
    const Phase8 base = to_phase(point);
    Mat<8> jac;
    for (std::size_t j = 0; j < 8; ++j) {
        const double delta = kJacobianPerturbation * std::fmax(1.0, std::fabs(base[j]));
        Phase8 plus = base, minus = base;
        plus[j] += delta;
        minus[j] -= delta;
        // The representable spacing, not the nominal 2*delta.
        const double span = plus[j] - minus[j];
        const Phase8 fp = to_phase(m1_step(problem, from_phase(plus), h));
        const Phase8 fm = to_phase(m1_step(problem, from_phase(minus), h));
        for (std::size_t i = 0; i < 8; ++i) jac(i, j) = (fp[i] - fm[i]) / span;
    }
    return LU<8>(jac).determinant();
}

}  // namespace rcpd
