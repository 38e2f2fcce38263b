#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "swb/error.hpp"
#include "swb/numerics/special_functions.hpp"

namespace swb::eval {

// Pearson's correlation. nullopt marks the undefined case (zero variance on
// either side); callers must propagate it, never coerce to 0.
inline std::optional<double> pearson(const std::vector<double>& a,
                                     const std::vector<double>& b) {
    if (a.size() != b.size()) throw ValidationError("pearson: length mismatch");
    if (a.size() < 2) throw ValidationError("pearson: need at least 2 elements");
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) return std::nullopt;
    return cov / std::sqrt(va * vb);
}

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

// Two-sample pooled-variance Student's t-test, two-sided p-value.
inline TTestResult two_sample_ttest(const std::vector<double>& a,
                                    const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw ValidationError("t-test: both groups need at least 2 members");
    TTestResult r;
    r.n_a = a.size();
    r.n_b = b.size();
    for (double v : a) r.mean_a += v;
    for (double v : b) r.mean_b += v;
    r.mean_a /= static_cast<double>(r.n_a);
    r.mean_b /= static_cast<double>(r.n_b);
    double ssa = 0.0, ssb = 0.0;
    for (double v : a) ssa += (v - r.mean_a) * (v - r.mean_a);
    for (double v : b) ssb += (v - r.mean_b) * (v - r.mean_b);
    double df = static_cast<double>(r.n_a + r.n_b - 2);
    double pooled = (ssa + ssb) / df;
    double se = std::sqrt(pooled * (1.0 / r.n_a + 1.0 / r.n_b));
    if (se == 0.0) {
        r.t = r.mean_a == r.mean_b ? 0.0 : std::numeric_limits<double>::infinity();
        r.p = r.mean_a == r.mean_b ? 1.0 : 0.0;
        return r;
    }
    r.t = (r.mean_a - r.mean_b) / se;
    r.p = num::student_t_two_sided_p(r.t, df);
    return r;
}

}  // namespace swb::eval
