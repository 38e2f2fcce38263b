#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "swb/numerics/matrix.hpp"
#include "swb/numerics/rng.hpp"
#include "swb/regress/problem.hpp"

namespace swb::reg {

namespace lasso_detail {

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// Column-standardized copy of the design over a row subset, stored as
// columns so the coordinate loops stream contiguous memory. Constant columns
// get sd 1 and are skipped by the solver (their coefficient stays 0).
struct Standardized {
    std::vector<std::vector<double>> xcols;  // standardized, per column
    std::vector<double> mean, sd;            // per column (population sd)
    std::vector<double> y;                   // centered
    double y_mean = 0.0;
    double y_var = 0.0;
    std::vector<bool> constant;

    std::size_t n() const { return y.size(); }
    std::size_t p() const { return xcols.size(); }
};

inline Standardized standardize(const num::DenseMatrix& x, const std::vector<double>& y,
                                const std::vector<std::size_t>& rows) {
    const std::size_t n = rows.size(), p = x.cols();
    Standardized s;
    s.xcols.assign(p, std::vector<double>(n, 0.0));
    s.mean.assign(p, 0.0);
    s.sd.assign(p, 1.0);
    s.constant.assign(p, false);
    s.y.resize(n);

    for (std::size_t i = 0; i < n; ++i) s.y_mean += y[rows[i]];
    s.y_mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.y[i] = y[rows[i]] - s.y_mean;
        s.y_var += s.y[i] * s.y[i];
    }
    s.y_var /= static_cast<double>(n);

    for (std::size_t j = 0; j < p; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += x(rows[i], j);
        m /= static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = x(rows[i], j) - m;
            v += d * d;
        }
        v /= static_cast<double>(n);
        s.mean[j] = m;
        if (v <= 0.0) {
            s.constant[j] = true;
        } else {
            s.sd[j] = std::sqrt(v);
            auto& col = s.xcols[j];
            for (std::size_t i = 0; i < n; ++i) col[i] = (x(rows[i], j) - m) / s.sd[j];
        }
    }
    return s;
}

struct CdResult {
    std::vector<double> beta;    // standardized scale
    long sweeps = 0;
    bool converged = true;
    std::vector<double> objective_trace;  // objective after each sweep
};

inline double objective(const Standardized& s, const std::vector<double>& residual,
                        const std::vector<double>& beta, double lambda) {
    const double n = static_cast<double>(s.n());
    double rss = 0.0;
    for (double r : residual) rss += r * r;
    double l1 = 0.0;
    for (double b : beta) l1 += std::fabs(b);
    return rss / (2.0 * n) + lambda * l1;
}

// Cyclic coordinate descent for (1/2n)||y - Xb||^2 + lambda*||b||_1 on
// standardized columns. Warm-startable via beta/residual in-out params.
// Active-set scheme: sweep the nonzero set until it stops moving, then one
// full sweep to confirm (or pull in new coordinates). Convergence uses the
// energy-scaled rule (max delta)^2 < tol * var(y); on unit-variance columns
// that is the per-update objective change measured against the null fit.
inline CdResult coordinate_descent(const Standardized& s, double lambda,
                                   std::vector<double>& beta, std::vector<double>& residual,
                                   double tol, long max_iter, bool trace = false) {
    const std::size_t n = s.n(), p = s.p();
    const double dn = static_cast<double>(n);
    const double thresh = tol * std::max(s.y_var, 1e-300);
    CdResult res;

    auto update = [&](std::size_t j) {
        const double* col = s.xcols[j].data();
        double rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += col[i] * residual[i];
        rho = rho / dn + beta[j];
        double next = soft_threshold(rho, lambda);
        double delta = next - beta[j];
        if (delta != 0.0) {
            for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * col[i];
            beta[j] = next;
        }
        return std::fabs(delta);
    };

    bool full_pass = true;
    std::vector<std::size_t> active;
    for (long sweep = 0; sweep < max_iter; ++sweep) {
        double max_delta = 0.0;
        if (full_pass) {
            active.clear();
            for (std::size_t j = 0; j < p; ++j) {
                if (s.constant[j]) continue;
                max_delta = std::max(max_delta, update(j));
                if (beta[j] != 0.0) active.push_back(j);
            }
        } else {
            for (std::size_t j : active) max_delta = std::max(max_delta, update(j));
        }
        ++res.sweeps;
        if (trace) res.objective_trace.push_back(objective(s, residual, beta, lambda));
        if (max_delta * max_delta < thresh) {
            if (full_pass) {
                res.beta = beta;
                return res;
            }
            full_pass = true;  // confirm on all coordinates
        } else {
            full_pass = active.empty();
        }
    }
    res.converged = false;
    res.beta = beta;
    return res;
}

inline double lambda_max(const Standardized& s) {
    const std::size_t n = s.n(), p = s.p();
    double lm = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        if (s.constant[j]) continue;
        double dotv = 0.0;
        for (std::size_t i = 0; i < n; ++i) dotv += s.xcols[j][i] * s.y[i];
        lm = std::max(lm, std::fabs(dotv) / static_cast<double>(n));
    }
    return lm;
}

inline std::vector<double> lambda_path(double lmax, int length, double ratio) {
    std::vector<double> path;
    if (lmax <= 0.0) return {0.0};
    double lmin = lmax * ratio;
    for (int k = 0; k < length; ++k) {
        double t = length == 1 ? 0.0 : static_cast<double>(k) / (length - 1);
        path.push_back(lmax * std::pow(lmin / lmax, t));
    }
    return path;
}

}  // namespace lasso_detail

struct LassoFitResult {
    std::vector<double> beta_original;  // per problem column, original scale
    double intercept = 0.0;
    long sweeps = 0;
    bool converged = true;
    std::vector<double> objective_trace;
};

// Single fixed-lambda solve on all rows (lambda on the standardized scale).
inline LassoFitResult fit_lasso_at_lambda(const RegressionProblem& problem, double lambda,
                                          const Hyperparameters& hp, bool trace = false) {
    problem.validate();
    std::vector<std::size_t> rows(problem.n());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    auto s = lasso_detail::standardize(problem.x, problem.y, rows);

    std::vector<double> beta(problem.p(), 0.0), residual = s.y;
    auto cd = lasso_detail::coordinate_descent(s, lambda, beta, residual, hp.lasso_tol,
                                               hp.lasso_max_iter, trace);

    LassoFitResult out;
    out.sweeps = cd.sweeps;
    out.converged = cd.converged;
    out.objective_trace = std::move(cd.objective_trace);
    out.beta_original.assign(problem.p(), 0.0);
    double offset = 0.0;
    for (std::size_t j = 0; j < problem.p(); ++j) {
        if (s.constant[j] || beta[j] == 0.0) continue;
        out.beta_original[j] = beta[j] / s.sd[j];
        offset += out.beta_original[j] * s.mean[j];
    }
    out.intercept = s.y_mean - offset;
    return out;
}

// Full LASSO: geometric lambda path from lambda_max, inner K-fold CV picking
// the lambda with the lowest mean held-out MSE, refit on all rows. The path
// is explored on the full data first and truncated once the fraction of
// variance explained saturates (> 0.999); past that point every smaller
// lambda is pure overfit and CV would never pick it.
inline TrainedModel fit_lasso(const RegressionProblem& problem, const Hyperparameters& hp,
                              std::uint64_t seed = 0) {
    problem.validate();
    const std::size_t n = problem.n(), p = problem.p();
    std::vector<std::size_t> all_rows(n);
    for (std::size_t i = 0; i < n; ++i) all_rows[i] = i;

    auto s_all = lasso_detail::standardize(problem.x, problem.y, all_rows);
    const double lmax = lasso_detail::lambda_max(s_all);
    auto path = lasso_detail::lambda_path(lmax, hp.lasso_path_length, hp.lasso_path_ratio);

    // Full-data pass: cache the solution at every lambda and truncate the
    // path where the fit saturates.
    double null_rss = 0.0;
    for (double v : s_all.y) null_rss += v * v;
    std::vector<std::vector<double>> beta_at(path.size());
    long sweeps = 0;
    bool converged = true;
    {
        std::vector<double> beta(p, 0.0), residual = s_all.y;
        double prev_dev = 0.0;
        std::size_t li = 0;
        for (; li < path.size(); ++li) {
            auto cd = lasso_detail::coordinate_descent(s_all, path[li], beta, residual,
                                                       hp.lasso_tol, hp.lasso_max_iter);
            sweeps += cd.sweeps;
            converged = converged && cd.converged;
            beta_at[li] = beta;
            if (null_rss <= 0.0) {
                ++li;
                break;
            }
            double rss = 0.0;
            for (double v : residual) rss += v * v;
            double dev = 1.0 - rss / null_rss;
            std::size_t active = 0;
            for (double b : beta) active += b != 0.0;
            // Saturation rules: fit explains ~everything, progress stalls,
            // or the active set nears interpolation size.
            if (dev > 0.999 || (li > 0 && dev - prev_dev < 1e-5) || active + 1 >= n) {
                ++li;
                break;
            }
            prev_dev = dev;
        }
        path.resize(li);
        beta_at.resize(li);
    }

    // Inner CV fold assignment: seeded shuffle, round-robin.
    const int k = std::max(2, std::min<int>(hp.lasso_cv_folds, static_cast<int>(n)));
    std::vector<int> fold(n);
    {
        std::vector<std::size_t> perm = all_rows;
        num::SeededRng rng(num::mix_seed({seed, 0x1a550ULL}));
        rng.shuffle(perm);
        for (std::size_t i = 0; i < n; ++i) fold[perm[i]] = static_cast<int>(i % k);
    }

    std::vector<double> cv_mse(path.size(), 0.0);
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < n; ++i) (fold[i] == f ? test : train).push_back(i);
        if (train.empty() || test.empty()) continue;
        auto s = lasso_detail::standardize(problem.x, problem.y, train);
        std::vector<double> beta(p, 0.0), residual = s.y;
        for (std::size_t li = 0; li < path.size(); ++li) {
            auto cd = lasso_detail::coordinate_descent(s, path[li], beta, residual,
                                                       hp.lasso_tol, hp.lasso_max_iter);
            converged = converged && cd.converged;
            // Held-out MSE at this lambda (original-scale prediction).
            double mse = 0.0;
            for (std::size_t t : test) {
                double pred = s.y_mean;
                for (std::size_t j = 0; j < p; ++j) {
                    if (s.constant[j] || beta[j] == 0.0) continue;
                    pred += beta[j] / s.sd[j] * (problem.x(t, j) - s.mean[j]);
                }
                double d = pred - problem.y[t];
                mse += d * d;
            }
            cv_mse[li] += mse / static_cast<double>(test.size());
        }
    }

    std::size_t best = 0;
    for (std::size_t li = 1; li < path.size(); ++li)
        if (cv_mse[li] < cv_mse[best]) best = li;

    const std::vector<double>& beta = beta_at[best];

    TrainedModel m;
    m.algorithm = Algorithm::lasso;
    double offset = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        if (s_all.constant[j] || beta[j] == 0.0) continue;
        double b = beta[j] / s_all.sd[j];
        m.selected_features.push_back(problem.column_names[j]);
        m.coefficients.push_back(b);
        offset += b * s_all.mean[j];
    }
    m.intercept = s_all.y_mean - offset;
    m.iterations = sweeps;
    m.converged = converged;
    m.training_info = {{"lambda", path[best]},
                       {"lambda_max", lmax},
                       {"cv_folds", k},
                       {"path_index", best}};
    return m;
}

}  // namespace swb::reg
