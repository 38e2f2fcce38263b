#pragma once

// Test-side oracles, kept independent of the library's solve paths.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace testutil {

inline std::string source_dir() { return SWB_SOURCE_DIR; }
inline std::string data_path(const std::string& rel) {
    return std::string(SWB_SOURCE_DIR) + "/data/" + rel;
}

// Adaptive Simpson quadrature.
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fb, double fm, double whole, double eps,
                           int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, fm, flm, left, eps / 2.0, depth - 1) +
           simpson_step(f, m, b, fm, fb, frm, right, eps / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fb, fm, whole, eps, 40);
}

// Dense normal-equations least squares via Gauss-Jordan; the deliberately
// naive reference for the QR path. Design given column-major.
inline std::vector<double> normal_equations_solve(const std::vector<std::vector<double>>& cols,
                                                  const std::vector<double>& y) {
    const std::size_t p = cols.size(), n = y.size();
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t r = 0; r < n; ++r) a[i][j] += cols[i][r] * cols[j][r];
        for (std::size_t r = 0; r < n; ++r) a[i][p] += cols[i][r] * y[r];
    }
    for (std::size_t k = 0; k < p; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < p; ++r)
            if (std::fabs(a[r][k]) > std::fabs(a[piv][k])) piv = r;
        std::swap(a[k], a[piv]);
        if (std::fabs(a[k][k]) < 1e-12) throw std::runtime_error("singular normal equations");
        for (std::size_t r = 0; r < p; ++r) {
            if (r == k) continue;
            double f = a[r][k] / a[k][k];
            for (std::size_t j = k; j <= p; ++j) a[r][j] -= f * a[k][j];
        }
    }
    std::vector<double> x(p);
    for (std::size_t k = 0; k < p; ++k) x[k] = a[k][p] / a[k][k];
    return x;
}

}  // namespace testutil
