#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

// Small dense real linear algebra: fixed-size matrices, determinants, and a
// one-sided Jacobi SVD used as the rank oracle throughout the test suite and
// the symbol scan.

namespace rarita {

template <int R, int C>
struct MatR {
    std::array<std::array<double, C>, R> a{};

    double& operator()(int r, int c) { return a[r][c]; }
    const double& operator()(int r, int c) const { return a[r][c]; }
};

using Mat34 = MatR<3, 4>;
using Mat44 = MatR<4, 4>;

inline double det4(const Mat44& m) {
    // cofactor expansion, exact for 4x4
    auto d3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
               m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
               m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
    };
    return m(0, 0) * d3(1, 2, 3, 1, 2, 3) - m(0, 1) * d3(1, 2, 3, 0, 2, 3) +
           m(0, 2) * d3(1, 2, 3, 0, 1, 3) - m(0, 3) * d3(1, 2, 3, 0, 1, 2);
}

/// Singular values of an arbitrary dense real matrix, descending.
/// One-sided Jacobi on the side with fewer rows-as-columns.
inline std::vector<double> singular_values(std::vector<std::vector<double>> a) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    if (rows < cols) {  // work with the transpose so cols <= rows
        std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
        a.swap(t);
        std::swap(rows, cols);
    }
    // orthogonalize columns pairwise
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (size_t p = 0; p + 1 < cols; ++p)
            for (size_t q = p + 1; q < cols; ++q) {
                double app = 0, aqq = 0, apq = 0;
                for (size_t i = 0; i < rows; ++i) {
                    app += a[i][p] * a[i][p];
                    aqq += a[i][q] * a[i][q];
                    apq += a[i][p] * a[i][q];
                }
                off = std::max(off, std::abs(apq) / (std::sqrt(app * aqq) + 1e-300));
                if (std::abs(apq) < 1e-300) continue;
                double tau = (aqq - app) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double cth = 1 / std::sqrt(1 + t * t), sth = t * cth;
                for (size_t i = 0; i < rows; ++i) {
                    double vp = a[i][p], vq = a[i][q];
                    a[i][p] = cth * vp - sth * vq;
                    a[i][q] = sth * vp + cth * vq;
                }
            }
        if (off < 1e-15) break;
    }
    std::vector<double> s(cols);
    for (size_t j = 0; j < cols; ++j) {
        double acc = 0;
        for (size_t i = 0; i < rows; ++i) acc += a[i][j] * a[i][j];
        s[j] = std::sqrt(acc);
    }
    std::sort(s.begin(), s.end(), std::greater<double>());
    return s;
}

template <int R, int C>
std::vector<double> singular_values(const MatR<R, C>& m) {
    std::vector<std::vector<double>> a(R, std::vector<double>(C));
    for (int i = 0; i < R; ++i)
        for (int j = 0; j < C; ++j) a[i][j] = m(i, j);
    return singular_values(std::move(a));
}

/// Numerical rank with relative threshold on sigma_1.
inline int numeric_rank(const std::vector<double>& sv, double rel_tol = 1e-10) {
    if (sv.empty() || sv[0] == 0) return 0;
    int r = 0;
    for (double s : sv)
        if (s > rel_tol * sv[0]) ++r;
    return r;
}

}  // namespace rarita
