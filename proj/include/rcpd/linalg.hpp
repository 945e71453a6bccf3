#pragma once

// Small fixed-size linear algebra used throughout the integrators.
// Everything here is value-typed and allocation-free.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace rcpd {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Dense N x N real matrix, row-major.
template <std::size_t N>
struct Mat {
    std::array<double, N * N> a{};

    static Mat zero() { return Mat{}; }
    static Mat identity() {
        Mat m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    Mat& operator+=(const Mat& o) {
        for (std::size_t k = 0; k < N * N; ++k) a[k] += o.a[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (std::size_t k = 0; k < N * N; ++k) a[k] -= o.a[k];
        return *this;
    }
    Mat& operator*=(double s) {
        for (double& x : a) x *= s;
        return *this;
    }

    friend Mat operator+(Mat l, const Mat& r) { return l += r; }
    friend Mat operator-(Mat l, const Mat& r) { return l -= r; }
    friend Mat operator*(double s, Mat m) { return m *= s; }

    friend Mat operator*(const Mat& l, const Mat& r) {
        Mat out;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const double lik = l(i, k);
                if (lik == 0.0) continue;
                for (std::size_t j = 0; j < N; ++j) out(i, j) += lik * r(k, j);
            }
        return out;
    }

    friend std::array<double, N> operator*(const Mat& m, const std::array<double, N>& x) {
        std::array<double, N> y{};
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < N; ++j) acc += m(i, j) * x[j];
            y[i] = acc;
        }
        return y;
    }

    Mat transposed() const {
        Mat t;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (double x : a) m = std::fmax(m, std::fabs(x));
        return m;
    }
};

using Mat4 = Mat<4>;

/// LU factorisation with partial pivoting. `min_pivot` is the smallest
/// absolute pivot met during elimination; callers decide what counts as singular.
template <std::size_t N>
struct LU {
    Mat<N> lu;
    std::array<std::size_t, N> perm{};
    int sign = 1;
    double min_pivot = std::numeric_limits<double>::infinity();

    explicit LU(Mat<N> m) : lu(m) {
        for (std::size_t i = 0; i < N; ++i) perm[i] = i;
        for (std::size_t k = 0; k < N; ++k) {
            std::size_t p = k;
            double best = std::fabs(lu(k, k));
            for (std::size_t i = k + 1; i < N; ++i) {
                if (std::fabs(lu(i, k)) > best) {
                    best = std::fabs(lu(i, k));
                    p = i;
                }
            }
            min_pivot = std::fmin(min_pivot, best);
            if (p != k) {
                for (std::size_t j = 0; j < N; ++j) std::swap(lu(k, j), lu(p, j));
                std::swap(perm[k], perm[p]);
                sign = -sign;
            }
            if (best == 0.0) continue;
            for (std::size_t i = k + 1; i < N; ++i) {
                const double f = lu(i, k) / lu(k, k);
                lu(i, k) = f;
                for (std::size_t j = k + 1; j < N; ++j) lu(i, j) -= f * lu(k, j);
            }
        }
    }

    double determinant() const {
        double d = sign;
        for (std::size_t i = 0; i < N; ++i) d *= lu(i, i);
        return d;
    }

    std::array<double, N> solve(const std::array<double, N>& b) const {
        std::array<double, N> y{};
        for (std::size_t i = 0; i < N; ++i) {
            double acc = b[perm[i]];
            for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * y[j];
            y[i] = acc;
        }
        for (std::size_t i = N; i-- > 0;) {
            double acc = y[i];
            for (std::size_t j = i + 1; j < N; ++j) acc -= lu(i, j) * y[j];
            y[i] = acc / lu(i, i);
        }
        return y;
    }
};

}  // namespace rcpd
