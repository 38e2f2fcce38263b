#pragma once

#include <cmath>
#include <limits>

#include "swb/error.hpp"

namespace swb::num {

namespace detail {

// Continued fraction for the incomplete beta, modified Lentz scheme.
inline double beta_cont_frac(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b). Symmetry switch keeps the continued
// fraction in its fast-converging region.
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw NumericError("incomplete_beta: a, b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw NumericError("incomplete_beta: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * detail::beta_cont_frac(a, b, x) / a;
    return 1.0 - front * detail::beta_cont_frac(b, a, 1.0 - x) / b;
}

// CDF of Student's t with df degrees of freedom.
inline double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw NumericError("student_t_cdf: df must be > 0");
    if (t == 0.0) return 0.5;
    double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return t > 0.0 ? 1.0 - tail : tail;
}

// Two-sided p-value for a t statistic: P(|T| >= |t|).
inline double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw NumericError("t-test p-value: df must be > 0");
    if (!std::isfinite(t)) return 0.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

// Upper tail of the F(1, df2) distribution, used for partial-F tests.
inline double f_test_p_value(double f, double df2) {
    if (!(df2 > 0.0)) throw NumericError("f-test p-value: df2 must be > 0");
    if (!std::isfinite(f)) return 0.0;
    if (f <= 0.0) return 1.0;
    return incomplete_beta(df2 / 2.0, 0.5, df2 / (df2 + f));
}

}  // namespace swb::num
