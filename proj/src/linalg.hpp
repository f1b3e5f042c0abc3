#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vinodec {

using Vec = std::vector<double>;

/// Row-major dense matrix, sized for k <= 8 geometry work.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    Vec row(std::size_t i) const { return Vec(a.begin() + i * cols, a.begin() + (i + 1) * cols); }

    Vec apply(const Vec& x) const {
        Vec y(rows, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += a[i * cols + j] * x[j];
            y[i] = s;
        }
        return y;
    }
};

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec sub(Vec x, const Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
}

inline Vec add(Vec x, const Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
}

inline Vec scale(Vec x, double t) {
    for (double& v : x) v *= t;
    return x;
}

/// Determinant by LU with partial pivoting. Destroys a local copy.
inline double determinant(Mat m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = m.rows;
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(m(r, col)) > std::fabs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

/// Solve L x = b for lower-triangular L with nonzero diagonal.
inline Vec solve_lower_triangular(const Mat& L, const Vec& b) {
    const std::size_t n = L.rows;
    Vec x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= L(i, j) * x[j];
        x[i] = s / L(i, i);
    }
    return x;
}

/// Modified Gram-Schmidt. Returns an orthonormal basis of the span;
/// vectors whose residual falls below `tol` times their norm are dropped.
inline std::vector<Vec> orthonormalize(const std::vector<Vec>& vectors, double tol = 1e-12) {
    std::vector<Vec> basis;
    for (Vec v : vectors) {
        const double original = norm2(v);
        for (const Vec& q : basis) v = sub(std::move(v), scale(q, dot(v, q)));
        const double residual = norm2(v);
        if (original == 0.0 || residual <= tol * original) continue;
        basis.push_back(scale(std::move(v), 1.0 / residual));
    }
    return basis;
}

} // namespace vinodec
