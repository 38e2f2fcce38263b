#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "swb/numerics/matrix.hpp"
#include "swb/regress/problem.hpp"

namespace swb::reg {

namespace svr_detail {

inline num::DenseMatrix kernel_matrix(const num::DenseMatrix& x, const std::string& kernel,
                                      double gamma) {
    const std::size_t n = x.rows(), p = x.cols();
    num::DenseMatrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double v = detail::kernel_eval(kernel, gamma, x.row_ptr(i), x.row_ptr(j), p);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

// Dual variables live in 2n slots: t < n is alpha_t (z=+1), t >= n is
// alpha*_{t-n} (z=-1). beta_i = a_i - a_{n+i}.
struct SmoResult {
    std::vector<double> a;      // length 2n
    double bias = 0.0;
    double objective = 0.0;
    long iterations = 0;
    bool converged = false;
};

inline double dual_objective(const num::DenseMatrix& k, const std::vector<double>& y,
                             double eps, const std::vector<double>& a) {
    const std::size_t n = y.size();
    std::vector<double> beta(n);
    for (std::size_t i = 0; i < n; ++i) beta[i] = a[i] - a[n + i];
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += k(i, j) * beta[j];
        quad += beta[i] * s;
    }
    double lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) lin += eps * (a[i] + a[n + i]) - y[i] * beta[i];
    return 0.5 * quad + lin;
}

// SMO with maximal-violating-pair selection on
//   min 1/2 a'Qa + p'a,  Q[s][t] = z_s z_t K(s%n, t%n),
//   p_t = eps - y_t (t<n), eps + y_{t-n} (t>=n),
//   s.t. sum z_t a_t = 0, 0 <= a_t <= C.
inline SmoResult solve_smo(const num::DenseMatrix& k, const std::vector<double>& y, double c,
                           double eps, double tol, long max_iter) {
    const std::size_t n = y.size();
    const std::size_t m = 2 * n;
    auto z = [n](std::size_t t) { return t < n ? 1.0 : -1.0; };

    std::vector<double> a(m, 0.0), g(m);
    for (std::size_t t = 0; t < m; ++t) g[t] = t < n ? eps - y[t] : eps + y[t - n];

    SmoResult res;
    const double tau = 1e-12;

    while (res.iterations < max_iter) {
        // i maximizes -z*g over I_up, j minimizes it over I_low.
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        std::size_t i = m, j = m;
        for (std::size_t t = 0; t < m; ++t) {
            bool up = (z(t) > 0 && a[t] < c) || (z(t) < 0 && a[t] > 0);
            bool low = (z(t) > 0 && a[t] > 0) || (z(t) < 0 && a[t] < c);
            double v = -z(t) * g[t];
            if (up && v > gmax) {
                gmax = v;
                i = t;
            }
            if (low && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        if (i == m || j == m || gmax - gmin <= tol) {
            res.converged = (i == m || j == m) || gmax - gmin <= tol;
            res.bias = (gmax + gmin) / 2.0;
            break;
        }
        ++res.iterations;

        const std::size_t ki = i % n, kj = j % n;
        double eta = k(ki, ki) + k(kj, kj) - 2.0 * k(ki, kj);
        if (eta <= tau) eta = tau;
        double step = (gmax - gmin) / eta;

        // Box clipping along the feasible direction da_i = z_i*t, da_j = -z_j*t.
        double limit_i = z(i) > 0 ? c - a[i] : a[i];
        double limit_j = z(j) > 0 ? a[j] : c - a[j];
        step = std::min(step, std::min(limit_i, limit_j));
        if (step <= 0) {  // numerically stuck pair
            res.bias = (gmax + gmin) / 2.0;
            break;
        }

        double da_i = z(i) * step, da_j = -z(j) * step;
        a[i] += da_i;
        a[j] += da_j;
        for (std::size_t t = 0; t < m; ++t) {
            double qti = z(t) * z(i) * k(t % n, ki);
            double qtj = z(t) * z(j) * k(t % n, kj);
            g[t] += qti * da_i + qtj * da_j;
        }
    }
    if (res.iterations >= max_iter) {
        // Recompute the bias bracket from the final gradient.
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < m; ++t) {
            bool up = (z(t) > 0 && a[t] < c) || (z(t) < 0 && a[t] > 0);
            bool low = (z(t) > 0 && a[t] > 0) || (z(t) < 0 && a[t] < c);
            double v = -z(t) * g[t];
            if (up) gmax = std::max(gmax, v);
            if (low) gmin = std::min(gmin, v);
        }
        res.bias = (gmax + gmin) / 2.0;
        res.converged = false;
    }

    res.a = std::move(a);
    return res;
}

}  // namespace svr_detail

// Epsilon-SVR. Keeps only rows with nonzero dual coefficient as support
// vectors; prediction is sum(coef * K(sv, x)) + bias.
inline TrainedModel fit_svr(const RegressionProblem& problem, const Hyperparameters& hp) {
    problem.validate();
    const std::size_t n = problem.n(), p = problem.p();
    if (hp.svr_kernel != "linear" && hp.svr_kernel != "rbf")
        throw UsageError("svr kernel must be 'linear' or 'rbf', got '" + hp.svr_kernel + "'");
    const double gamma =
        hp.svr_gamma > 0 ? hp.svr_gamma : 1.0 / static_cast<double>(p);

    num::DenseMatrix k = svr_detail::kernel_matrix(problem.x, hp.svr_kernel, gamma);
    auto smo = svr_detail::solve_smo(k, problem.y, hp.svr_cost, hp.svr_epsilon, hp.svr_tol,
                                     hp.svr_max_iter);

    TrainedModel m;
    m.algorithm = Algorithm::svr;
    m.kernel = hp.svr_kernel;
    m.rbf_gamma = gamma;
    m.epsilon = hp.svr_epsilon;
    m.cost = hp.svr_cost;
    m.bias = smo.bias;
    m.input_features = problem.column_names;
    m.selected_features = problem.column_names;
    for (std::size_t i = 0; i < n; ++i) {
        double coef = smo.a[i] - smo.a[n + i];
        if (coef == 0.0) continue;
        SupportVector sv;
        sv.coef = coef;
        sv.x.assign(problem.x.row_ptr(i), problem.x.row_ptr(i) + p);
        m.support.push_back(std::move(sv));
    }
    m.iterations = smo.iterations;
    m.converged = smo.converged;
    m.training_info = {{"dual_objective", svr_detail::dual_objective(k, problem.y,
                                                                     hp.svr_epsilon, smo.a)},
                       {"support_count", m.support.size()}};
    return m;
}

}  // namespace swb::reg
