#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "rcpd/errors.hpp"
#include "rcpd/lorentz_algebra.hpp"

using namespace rcpd;

namespace {

const Mat4 kMinkowski = [] {
    Mat4 m = Mat4::identity();
    m(3, 3) = -1.0;
    return m;
}();

FieldSample random_fields(std::mt19937_64& rng, double bound) {
    std::uniform_real_distribution<double> u(-bound, bound);
    FieldSample s;
    for (int i = 0; i < 3; ++i) {
        s.B[i] = u(rng);
        s.E[i] = u(rng);
    }
    return s;
}

// Largest |s| sqrt|lambda| over both roots: the series oracle converges
// geometrically with ratio (this / (pi/2))^2.
double series_radius_use(double r1, double r2, double s) {
    const double d = std::sqrt(r1 * r1 + 4 * r2 * r2);
    return std::fabs(s) * std::sqrt(std::fmax(std::fabs(0.5 * (r1 + d)), std::fabs(0.5 * (r1 - d))));
}

}  // namespace

TEST_CASE("Bernoulli and Euler numbers from the oracle") {
    const auto b = oracle::bernoulli_even(6);
    CHECK(b[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(b[2] == doctest::Approx(-1.0 / 30.0).epsilon(1e-15));
    CHECK(b[3] == doctest::Approx(1.0 / 42.0).epsilon(1e-14));
    CHECK(b[5] == doctest::Approx(5.0 / 66.0).epsilon(1e-14));
    const auto e = oracle::euler_even(5);
    CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e[1] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(e[2] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(e[3] == doctest::Approx(-61.0).epsilon(1e-14));
    CHECK(e[4] == doctest::Approx(1385.0).epsilon(1e-14));
    CHECK(oracle::tanh_coefficient(2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(oracle::sech_coefficient(2) == doctest::Approx(5.0 / 24.0).epsilon(1e-15));
}

TEST_CASE("build_F for a unit B along x3") {
    FieldSample s;
    s.B = {0, 0, 1};
    const Mat4 g = build_F(s);
    const double expected[4][4] = {{0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(g(i, j) == expected[i][j]);
    CHECK(build_F(FieldSample{}).max_abs() == 0.0);
}

TEST_CASE("cross matrix acts as a -> a x w") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int n = 0; n < 50; ++n) {
        const Vec3 w{u(rng), u(rng), u(rng)}, a{u(rng), u(rng), u(rng)};
        const auto got = cross_matrix(w) * a;
        const Vec3 want = cross(a, w);
        for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
    }
}

TEST_CASE("G is skew with respect to the Minkowski metric") {
    std::mt19937_64 rng(12);
    for (int n = 0; n < 100; ++n) {
        const Mat4 g = build_F(random_fields(rng, 10.0));
        const Mat4 sym = g.transposed() * kMinkowski + kMinkowski * g;
        CHECK(sym.max_abs() <= 1e-15);
    }
}

TEST_CASE("Ghat with no electric field") {
    FieldSample s;
    s.B = {0.3, -0.7, 1.1};
    const Mat4 gh = build_Fhat(s);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) CHECK(gh(i, j) == 0.0);
        CHECK(gh(i, 3) == -s.B[i]);
        CHECK(gh(3, i) == -s.B[i]);
    }
    CHECK(gh(3, 3) == 0.0);
}

TEST_CASE("cubic and product identities of G and Ghat") {
    std::mt19937_64 rng(13);
    for (double bound : {1.0, 10.0}) {
        for (int n = 0; n < 100; ++n) {
            const FieldSample s = random_fields(rng, bound);
            const auto inv = lorentz_invariants(s);
            const Mat4 g = build_F(s), gh = build_Fhat(s);
            const double scale = 1.0 + g.max_abs();
            const Mat4 cubic = g * g * g - inv.r1 * g - inv.r2 * gh;
            const Mat4 prod = g * gh - inv.r2 * Mat4::identity();
            // relative to the magnitude of the terms being cancelled
            CHECK(cubic.max_abs() / (scale * scale * scale) <= 1e-12);
            CHECK(prod.max_abs() / (scale * scale) <= 1e-12);
            if (bound == 1.0) {
                CHECK(cubic.max_abs() <= 1e-12);
                CHECK(prod.max_abs() <= 1e-12);
            }
        }
    }
}

TEST_CASE("invariant roots") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int n = 0; n < 1000; ++n) {
        const double r1 = u(rng), r2 = u(rng);
        const auto r = invariant_roots(r1, r2);
        CHECK(r.lambda1 >= 0.0);
        CHECK(r.lambda2 <= 0.0);
        CHECK(r.lambda1 + r.lambda2 == doctest::Approx(r1).epsilon(1e-12).scale(r.d));
        CHECK(r.lambda1 * r.lambda2 == doctest::Approx(-r2 * r2).epsilon(1e-12));
        CHECK(r.lambda1 - r.lambda2 == doctest::Approx(r.d).epsilon(1e-12));
    }
}

TEST_CASE("kernel coefficients: closed-form examples") {
    SUBCASE("pure unit B") {
        for (double s : {0.01, 0.1, 0.5, 1.2}) {
            const KernelCoeffs k = kernel_coeffs(-1.0, 0.0, s);
            CHECK(k.K1 == doctest::Approx(std::tan(s)).epsilon(1e-14));
            CHECK(k.K2 == 0.0);
            CHECK(k.K3 == 1.0);
            CHECK(k.K4 == doctest::Approx(1.0 - 1.0 / std::cos(s)).epsilon(1e-13));
            if (s < 0.9) {
                const auto o = oracle::kernel_series(-1.0, 0.0, s);
                CHECK(k.K1 == doctest::Approx(o.K1).epsilon(1e-13));
                CHECK(k.K4 == doctest::Approx(o.K4).epsilon(1e-13));
            }
        }
    }
    SUBCASE("pure E") {
        for (double e : {0.5, 2.0, 7.0}) {
            const double s = 0.1;
            const KernelCoeffs k = kernel_coeffs(e * e, 0.0, s);
            CHECK(k.K1 == doctest::Approx(std::tanh(s * e) / e).epsilon(1e-14));
            const auto o = oracle::kernel_series(e * e, 0.0, s);
            CHECK(k.K1 == doctest::Approx(o.K1).epsilon(1e-13));
        }
    }
    SUBCASE("zero argument") {
        const KernelCoeffs k = kernel_coeffs(3.0, -2.0, 0.0);
        CHECK(k.K1 == 0.0);
        CHECK(k.K2 == 0.0);
        CHECK(k.K3 == 1.0);
        CHECK(k.K4 == 0.0);
    }
    SUBCASE("low-order expansion in the half step") {
        // K1 = h/2 - h^3 r1/24 + ..., K2 = -h^3 r2/24 + ..., K4 = -h^2/8 + ...
        const double r1 = 0.7, r2 = -0.4, h = 1e-3;
        const KernelCoeffs k = kernel_coeffs(r1, r2, h / 2);
        CHECK(k.K1 == doctest::Approx(h / 2 - h * h * h * r1 / 24).epsilon(1e-12));
        CHECK(k.K2 == doctest::Approx(-h * h * h * r2 / 24).epsilon(1e-5));
        CHECK(k.K4 == doctest::Approx(-h * h / 8).epsilon(1e-5));
    }
}

TEST_CASE("kernel coefficients: pole guard") {
    const double edge = 0.5 * std::numbers::pi - kPoleMargin;
    CHECK_THROWS_AS(kernel_coeffs(-1.0, 0.0, edge + 1e-6), PoleProximity);
    CHECK_THROWS_AS(kernel_coeffs(-1.0, 0.0, -(edge + 1e-6)), PoleProximity);
    CHECK_NOTHROW(kernel_coeffs(-1.0, 0.0, edge - 1e-6));
    // strong field: |B| = 100 puts the pole at s ~ 0.0157
    CHECK_THROWS_AS(kernel_coeffs(-1e4, 0.0, 0.02), PoleProximity);
}

TEST_CASE("kernel coefficients are odd/even in the argument") {
    const KernelCoeffs p = kernel_coeffs(1.3, 0.8, 0.2), m = kernel_coeffs(1.3, 0.8, -0.2);
    CHECK(m.K1 == doctest::Approx(-p.K1).epsilon(1e-15));
    CHECK(m.K2 == doctest::Approx(-p.K2).epsilon(1e-15));
    CHECK(m.K3 == doctest::Approx(p.K3).epsilon(1e-15));
    CHECK(m.K4 == doctest::Approx(p.K4).epsilon(1e-15));
}

TEST_CASE("kernel and exp coefficients match the series oracle on random samples") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> ur(-10, 10), us(0.0, 0.3);
    int checked = 0;
    double worst_k = 0.0, worst_e = 0.0;
    while (checked < 1000) {
        const double r1 = ur(rng), r2 = ur(rng), s = us(rng);
        if (s == 0.0 || series_radius_use(r1, r2, s) > 1.0) continue;
        ++checked;
        const KernelCoeffs k = kernel_coeffs(r1, r2, s);
        const auto ok = oracle::kernel_series(r1, r2, s);
        worst_k = std::fmax(worst_k, std::fabs(k.K1 - ok.K1));
        worst_k = std::fmax(worst_k, std::fabs(k.K2 - ok.K2));
        worst_k = std::fmax(worst_k, std::fabs(k.K3 - ok.K3));
        worst_k = std::fmax(worst_k, std::fabs(k.K4 - ok.K4));
        const ExpCoeffs e = exp_coeffs(r1, r2, s);
        const auto oe = oracle::exp_coeff_series(r1, r2, s);
        worst_e = std::fmax(worst_e, std::fabs(e.chi1 - oe.chi1));
        worst_e = std::fmax(worst_e, std::fabs(e.sigma1 - oe.sigma1));
        worst_e = std::fmax(worst_e, std::fabs(e.chi2 - oe.chi2));
        worst_e = std::fmax(worst_e, std::fabs(e.sigma2 - oe.sigma2));
    }
    INFO("worst kernel deviation " << worst_k << ", worst exp deviation " << worst_e);
    CHECK(worst_k <= 1e-12);
    CHECK(worst_e <= 1e-12);
}

TEST_CASE("coefficients are continuous through the degenerate limit d -> 0") {
    for (double s : {0.05, 0.3}) {
        double worst = 0.0;
        for (int i = 0; i <= 120; ++i) {
            const double d = std::pow(10.0, -14.0 + 12.0 * i / 120.0);
            const double t = d / std::sqrt(5.0);  // r1 = r2 = t gives d = sqrt(5) t
            const KernelCoeffs k = kernel_coeffs(t, t, s);
            const auto o = oracle::kernel_series(t, t, s);
            worst = std::fmax(worst, std::fabs(k.K1 - o.K1));
            worst = std::fmax(worst, std::fabs(k.K2 - o.K2));
            worst = std::fmax(worst, std::fabs(k.K3 - o.K3));
            worst = std::fmax(worst, std::fabs(k.K4 - o.K4));
            const ExpCoeffs e = exp_coeffs(t, t, s);
            const auto oe = oracle::exp_coeff_series(t, t, s);
            worst = std::fmax(worst, std::fabs(e.chi1 - oe.chi1));
            worst = std::fmax(worst, std::fabs(e.sigma1 - oe.sigma1));
            worst = std::fmax(worst, std::fabs(e.chi2 - oe.chi2));
            worst = std::fmax(worst, std::fabs(e.sigma2 - oe.sigma2));
        }
        INFO("s = " << s << " worst " << worst);
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("coefficients are continuous as one root vanishes") {
    // r1 = -1, r2 -> 0 drives lambda1 -> 0 with d ~ 1.
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double r2 = std::pow(10.0, -14.0 + 13.0 * i / 100.0);
        for (double s : {0.05, 0.3}) {
            const KernelCoeffs k = kernel_coeffs(-1.0, r2, s);
            const auto o = oracle::kernel_series(-1.0, r2, s);
            worst = std::fmax(worst, std::fabs(k.K1 - o.K1) + std::fabs(k.K2 - o.K2) + std::fabs(k.K3 - o.K3) +
                                         std::fabs(k.K4 - o.K4));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("half-step tanh and sech matrices") {
    std::mt19937_64 rng(16);
    for (int n = 0; n < 100; ++n) {
        const FieldSample s = random_fields(rng, 2.0);
        const double h = 0.2;
        const Mat4 t = mat_tanh_half(s, h), c = mat_sech_half(s, h);
        const Mat4 id = c * c + t * t;
        CHECK((id - Mat4::identity()).max_abs() <= 1e-11);
    }
    FieldSample s;
    s.B = {0, 0, 1};
    const Mat4 t = mat_tanh_half(s, 0.2);
    CHECK((t - std::tan(0.1) * build_F(s)).max_abs() <= 1e-15);
    FieldSample r = random_fields(rng, 1.0);
    CHECK(mat_tanh_half(r, 0.0).max_abs() == 0.0);
    CHECK((mat_sech_half(r, 0.0) - Mat4::identity()).max_abs() == 0.0);
    FieldSample strong;
    strong.B = {0, 0, 100};
    CHECK_THROWS_AS(mat_tanh_half(strong, 0.04), PoleProximity);
}

TEST_CASE("matrix exponential") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> us(-0.5, 0.5), uu(-2, 2);
    SUBCASE("inverse, determinant and Minkowski isometry") {
        for (int n = 0; n < 200; ++n) {
            const FieldSample f = random_fields(rng, 3.0);
            const double step = us(rng);
            const Mat4 e = mat_exp(f, step);
            CHECK((mat_exp(f, -step) * e - Mat4::identity()).max_abs() <= 1e-11);
            CHECK(LU<4>(e).determinant() == doctest::Approx(1.0).epsilon(1e-11));
            const Vec4 u{uu(rng), uu(rng), uu(rng), uu(rng)};
            const Vec4 w = e * u;
            const double before = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] - u[3] * u[3];
            const double after = w[0] * w[0] + w[1] * w[1] + w[2] * w[2] - w[3] * w[3];
            const double scale = u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
            CHECK(std::fabs(after - before) <= 1e-12 * std::fmax(std::fabs(before), scale));
        }
    }
    SUBCASE("zero step is the identity") {
        CHECK((mat_exp(random_fields(rng, 1.0), 0.0) - Mat4::identity()).max_abs() == 0.0);
    }
    SUBCASE("pure B reduces to a rotation (Rodrigues)") {
        FieldSample f;
        f.B = {0.3, -1.2, 0.8};
        const double b = norm(f.B), s = 0.37;
        const Mat4 g = build_F(f);
        const Mat4 rod = Mat4::identity() + (std::sin(s * b) / b) * g + ((1 - std::cos(s * b)) / (b * b)) * (g * g);
        CHECK((mat_exp(f, s) - rod).max_abs() <= 1e-14);
        CHECK((mat_exp(f, s) - oracle::exp_scaling_squaring(g, s)).max_abs() <= 1e-13);
    }
    SUBCASE("agrees with the matrix Taylor series") {
        double worst = 0.0;
        for (int n = 0; n < 200; ++n) {
            const FieldSample f = random_fields(rng, 3.0);
            const double s = us(rng);
            const Mat4 g = build_F(f);
            if (std::fabs(s) * g.max_abs() * 4 > 3.0) continue;
            worst = std::fmax(worst, (mat_exp(f, s) - oracle::exp_series(g, s)).max_abs());
        }
        CHECK(worst <= 1e-12);
    }
}
