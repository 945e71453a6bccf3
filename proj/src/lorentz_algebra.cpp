#include "rcpd/lorentz_algebra.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rcpd/errors.hpp"

namespace rcpd {

namespace {

// Below these values of |lambda| s^2 and d s^2 the closed forms lose digits
// to cancellation and the truncated power series in lambda takes over.
constexpr double kSeriesThreshold = 1e-4;
constexpr int kTerms = 9;

// tanh z = sum_{k>=1} kTanh[k] z^(2k-1)
constexpr std::array<double, kTerms + 1> kTanh = {
    0.0,
    1.0,
    -1.0 / 3.0,
    2.0 / 15.0,
    -17.0 / 315.0,
    62.0 / 2835.0,
    -1382.0 / 155925.0,
    21844.0 / 6081075.0,
    -929569.0 / 638512875.0,
    6404582.0 / 10854718875.0,
};

// sech z = sum_{k>=0} kSech[k] z^(2k)
constexpr std::array<double, kTerms + 1> kSech = {
    1.0,
    -1.0 / 2.0,
    5.0 / 24.0,
    -61.0 / 720.0,
    1385.0 / 40320.0,
    -50521.0 / 3628800.0,
    2702765.0 / 479001600.0,
    -199360981.0 / 87178291200.0,
    19391512145.0 / 20922789888000.0,
    -2404879675441.0 / 6402373705728000.0,
};

double inv_factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f /= k;
    return f;
}

// A scalar function g(lambda) = sum_j c_j lambda^j of the root lambda at a
// fixed step argument s, plus its closed form on both branches. The closed
// form returns g - c_0 so differences of two branches do not cancel.
struct Family {
    std::array<double, kTerms + 1> c{};
    double (*closed_minus_c0)(double lambda, double s, double c0) = nullptr;

    double series(double lambda) const {
        double acc = 0.0;
        for (int j = kTerms; j >= 0; --j) acc = acc * lambda + c[j];
        return acc;
    }

    double value(double lambda, double s) const {
        if (std::fabs(lambda) * s * s < kSeriesThreshold) return series(lambda);
        return c[0] + closed_minus_c0(lambda, s, c[0]);
    }

    // (g(l1) - g(l2)) / (l1 - l2), with l1 - l2 = d >= 0.
    double divided_difference(double l1, double l2, double d, double s) const {
        if (d * s * s < kSeriesThreshold) {
            // sum_j c_j (l1^j - l2^j)/(l1 - l2) = sum_j c_j h_{j-1}(l1, l2)
            double acc = 0.0;
            double h = 1.0;  // complete homogeneous polynomial h_{j-1}
            double p2 = 1.0;
            for (int j = 1; j <= kTerms; ++j) {
                acc += c[j] * h;
                p2 *= l2;
                h = l1 * h + p2;
            }
            return acc;
        }
        auto part = [&](double l) {
            if (std::fabs(l) * s * s < kSeriesThreshold) return series(l) - c[0];
            return closed_minus_c0(l, s, c[0]);
        };
        return (part(l1) - part(l2)) / d;
    }
};

// sqrt(l) tanh(s sqrt(l))
Family tanh_times_root(double s) {
    Family f;
    for (int j = 1; j <= kTerms; ++j) f.c[j] = kTanh[j] * std::pow(s, 2 * j - 1);
    f.closed_minus_c0 = [](double l, double s, double) {
        if (l > 0) {
            const double r = std::sqrt(l);
            return r * std::tanh(s * r);
        }
        const double a = std::sqrt(-l);
        return -a * std::tan(s * a);
    };
    return f;
}

// tanh(s sqrt(l)) / sqrt(l)
Family tanh_over_root(double s) {
    Family f;
    for (int j = 0; j < kTerms; ++j) f.c[j] = kTanh[j + 1] * std::pow(s, 2 * j + 1);
    f.closed_minus_c0 = [](double l, double s, double c0) {
        if (l > 0) {
            const double r = std::sqrt(l);
            return std::tanh(s * r) / r - c0;
        }
        const double a = std::sqrt(-l);
        return std::tan(s * a) / a - c0;
    };
    return f;
}

// sech(s sqrt(l))
Family sech_of_root(double s) {
    Family f;
    for (int j = 0; j <= kTerms; ++j) f.c[j] = kSech[j] * std::pow(s, 2 * j);
    f.closed_minus_c0 = [](double l, double s, double) {
        if (l > 0) {
            const double z = s * std::sqrt(l);
            const double sh = std::sinh(0.5 * z);
            return -2.0 * sh * sh / std::cosh(z);
        }
        const double z = s * std::sqrt(-l);
        const double sn = std::sin(0.5 * z);
        return 2.0 * sn * sn / std::cos(z);
    };
    return f;
}

// (sech(s sqrt(l)) - 1) / l
Family sech_minus_one_over_l(double s) {
    Family f;
    for (int j = 0; j < kTerms; ++j) f.c[j] = kSech[j + 1] * std::pow(s, 2 * j + 2);
    f.closed_minus_c0 = [](double l, double s, double c0) {
        if (l > 0) {
            const double z = s * std::sqrt(l);
            const double sh = std::sinh(0.5 * z);
            return -2.0 * sh * sh / std::cosh(z) / l - c0;
        }
        const double z = s * std::sqrt(-l);
        const double sn = std::sin(0.5 * z);
        return 2.0 * sn * sn / std::cos(z) / l - c0;
    };
    return f;
}

// sqrt(l) sinh(s sqrt(l))
Family sinh_times_root(double s) {
    Family f;
    for (int j = 1; j <= kTerms; ++j) f.c[j] = std::pow(s, 2 * j - 1) * inv_factorial(2 * j - 1);
    f.closed_minus_c0 = [](double l, double s, double) {
        if (l > 0) {
            const double r = std::sqrt(l);
            return r * std::sinh(s * r);
        }
        const double a = std::sqrt(-l);
        return -a * std::sin(s * a);
    };
    return f;
}

// sinh(s sqrt(l)) / sqrt(l)
Family sinh_over_root(double s) {
    Family f;
    for (int j = 0; j <= kTerms; ++j) f.c[j] = std::pow(s, 2 * j + 1) * inv_factorial(2 * j + 1);
    f.closed_minus_c0 = [](double l, double s, double c0) {
        if (l > 0) {
            const double r = std::sqrt(l);
            return std::sinh(s * r) / r - c0;
        }
        const double a = std::sqrt(-l);
        return std::sin(s * a) / a - c0;
    };
    return f;
}

// cosh(s sqrt(l))
Family cosh_of_root(double s) {
    Family f;
    for (int j = 0; j <= kTerms; ++j) f.c[j] = std::pow(s, 2 * j) * inv_factorial(2 * j);
    f.closed_minus_c0 = [](double l, double s, double) {
        if (l > 0) {
            const double sh = std::sinh(0.5 * s * std::sqrt(l));
            return 2.0 * sh * sh;
        }
        const double sn = std::sin(0.5 * s * std::sqrt(-l));
        return -2.0 * sn * sn;
    };
    return f;
}

// (cosh(s sqrt(l)) - 1) / l
Family cosh_minus_one_over_l(double s) {
    Family f;
    for (int j = 0; j <= kTerms; ++j) f.c[j] = std::pow(s, 2 * j + 2) * inv_factorial(2 * j + 2);
    f.closed_minus_c0 = [](double l, double s, double c0) {
        if (l > 0) {
            const double sh = std::sinh(0.5 * s * std::sqrt(l));
            return 2.0 * sh * sh / l - c0;
        }
        const double sn = std::sin(0.5 * s * std::sqrt(-l));
        return -2.0 * sn * sn / l - c0;
    };
    return f;
}

}  // namespace

InvariantRoots invariant_roots(double r1, double r2) {
    InvariantRoots out;
    out.d = std::hypot(r1, 2.0 * r2);
    const double q = r2 * r2;
    if (r1 >= 0.0) {
        out.lambda1 = 0.5 * (r1 + out.d);
        out.lambda2 = out.lambda1 > 0.0 ? -q / out.lambda1 : 0.0;
    } else {
        out.lambda2 = 0.5 * (r1 - out.d);
        out.lambda1 = -q / out.lambda2;
    }
    return out;
}

Mat<3> cross_matrix(const Vec3& w) {
    Mat<3> m;
    m(0, 1) = w[2];
    m(0, 2) = -w[1];
    m(1, 0) = -w[2];
    m(1, 2) = w[0];
    m(2, 0) = w[1];
    m(2, 1) = -w[0];
    return m;
}

Mat4 build_F(const FieldSample& s) {
    const Mat<3> bx = cross_matrix(s.B);
    Mat4 g;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) g(i, j) = bx(i, j);
        g(i, 3) = s.E[i];
        g(3, i) = s.E[i];
    }
    return g;
}

Mat4 build_Fhat(const FieldSample& s) {
    const Mat<3> ex = cross_matrix(s.E);
    Mat4 g;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) g(i, j) = ex(i, j);
        g(i, 3) = -s.B[i];
        g(3, i) = -s.B[i];
    }
    return g;
}

KernelCoeffs kernel_coeffs(double r1, double r2, double s) {
    const InvariantRoots roots = invariant_roots(r1, r2);
    const double a2 = std::sqrt(-roots.lambda2);
    if (std::fabs(s) * a2 >= 0.5 * std::numbers::pi - kPoleMargin) {
        std::ostringstream msg;
        msg << "kernel argument |s|*sqrt(-lambda2) = " << std::fabs(s) * a2
            << " is within " << kPoleMargin << " of the tan/sec pole pi/2 (s = " << s << ")";
        throw PoleProximity(msg.str());
    }

    KernelCoeffs k;
    k.r1 = r1;
    k.r2 = r2;
    k.d = roots.d;
    k.lambda1 = roots.lambda1;
    k.lambda2 = roots.lambda2;
    k.s = s;
    const double l1 = roots.lambda1, l2 = roots.lambda2, d = roots.d;
    k.K1 = tanh_times_root(s).divided_difference(l1, l2, d, s);
    k.K2 = r2 * tanh_over_root(s).divided_difference(l1, l2, d, s);
    k.K3 = 1.0 + r2 * r2 * sech_minus_one_over_l(s).divided_difference(l1, l2, d, s);
    k.K4 = sech_of_root(s).divided_difference(l1, l2, d, s);
    return k;
}

ExpCoeffs exp_coeffs(double r1, double r2, double s) {
    const InvariantRoots roots = invariant_roots(r1, r2);
    const double l1 = roots.lambda1, l2 = roots.lambda2, d = roots.d;
    ExpCoeffs e;
    e.sigma1 = sinh_times_root(s).divided_difference(l1, l2, d, s);
    e.sigma2 = r2 * sinh_over_root(s).divided_difference(l1, l2, d, s);
    e.chi1 = 1.0 + r2 * r2 * cosh_minus_one_over_l(s).divided_difference(l1, l2, d, s);
    e.chi2 = cosh_of_root(s).divided_difference(l1, l2, d, s);
    return e;
}

Mat4 mat_tanh_half(const FieldSample& s, double h) {
    const auto inv = lorentz_invariants(s);
    const KernelCoeffs k = kernel_coeffs(inv.r1, inv.r2, 0.5 * h);
    return k.K1 * build_F(s) + k.K2 * build_Fhat(s);
}

Mat4 mat_sech_half(const FieldSample& s, double h) {
    const auto inv = lorentz_invariants(s);
    const KernelCoeffs k = kernel_coeffs(inv.r1, inv.r2, 0.5 * h);
    const Mat4 g = build_F(s);
    return k.K3 * Mat4::identity() + k.K4 * (g * g);
}

Mat4 mat_exp(const FieldSample& s, double step) {
    const auto inv = lorentz_invariants(s);
    const ExpCoeffs e = exp_coeffs(inv.r1, inv.r2, step);
    const Mat4 g = build_F(s);
    return e.chi1 * Mat4::identity() + e.sigma1 * g + e.chi2 * (g * g) + e.sigma2 * build_Fhat(s);
}

}  // namespace rcpd
