#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "swb/numerics/least_squares.hpp"
#include "swb/regress/problem.hpp"

namespace swb::reg {

namespace mars_detail {

struct Hinge {
    std::size_t feature;
    int sign;      // +1: max(0, x - knot), -1: max(0, knot - x)
    double knot;
};

inline std::vector<double> hinge_column(const num::DenseMatrix& x, const Hinge& h) {
    std::vector<double> c(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double v = h.sign > 0 ? x(i, h.feature) - h.knot : h.knot - x(i, h.feature);
        c[i] = v > 0 ? v : 0.0;
    }
    return c;
}

// Candidate knots: order statistics thinned by Friedman's minspan/endspan
// heuristic (alpha = 0.05), then evenly subsampled down to max_knots.
inline std::vector<double> candidate_knots(std::vector<double> values, std::size_t p,
                                           int max_knots) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n < 4) return {};
    const double alpha = 0.05;
    const double dp = static_cast<double>(p), dn = static_cast<double>(n);
    int minspan = static_cast<int>(
        std::floor(-std::log2(-std::log1p(-alpha) / (dp * dn)) / 2.5));
    minspan = std::max(1, minspan);
    int endspan = static_cast<int>(std::floor(3.0 - std::log2(alpha / dp)));
    endspan = std::max(1, endspan);

    std::vector<double> knots;
    double last = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = static_cast<std::size_t>(endspan);
         i + static_cast<std::size_t>(endspan) < n;
         i += static_cast<std::size_t>(minspan)) {
        if (values[i] != last) {
            knots.push_back(values[i]);
            last = values[i];
        }
    }
    // A knot at the column max makes the increasing hinge all-zero.
    while (!knots.empty() && knots.back() >= values[n - 1]) knots.pop_back();

    if (max_knots > 0 && knots.size() > static_cast<std::size_t>(max_knots)) {
        std::vector<double> thinned;
        for (int k = 0; k < max_knots; ++k) {
            std::size_t idx = static_cast<std::size_t>(
                (static_cast<double>(k) + 0.5) * static_cast<double>(knots.size()) / max_knots);
            thinned.push_back(knots[std::min(idx, knots.size() - 1)]);
        }
        thinned.erase(std::unique(thinned.begin(), thinned.end()), thinned.end());
        knots = std::move(thinned);
    }
    return knots;
}

// GCV = RSS / (n * (1 - C/n)^2) with C = M + d*(M-1), M counting the
// intercept as a basis function.
inline double gcv(double rss, std::size_t n, std::size_t basis_count, double d) {
    double c = static_cast<double>(basis_count) + d * (static_cast<double>(basis_count) - 1.0);
    double dn = static_cast<double>(n);
    if (c >= dn) return std::numeric_limits<double>::infinity();
    double denom = dn * (1.0 - c / dn) * (1.0 - c / dn);
    return rss / denom;
}

inline double refit_rss(const num::DenseMatrix& x, const std::vector<double>& y,
                        const std::vector<Hinge>& hinges,
                        const std::vector<std::size_t>& subset) {
    const std::size_t n = x.rows();
    num::DenseMatrix design(n, subset.size() + 1);
    for (std::size_t i = 0; i < n; ++i) design(i, 0) = 1.0;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        auto col = hinge_column(x, hinges[subset[k]]);
        for (std::size_t i = 0; i < n; ++i) design(i, k + 1) = col[i];
    }
    try {
        return num::solve_least_squares(design, y).rss;
    } catch (const num::RankDeficientError&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace mars_detail

// Additive (degree-1) MARS. Forward pass greedily adds mirrored hinge pairs
// maximizing RSS reduction up to max_basis functions; backward pass prunes by
// GCV and returns the best subset seen.
inline TrainedModel fit_mars(const RegressionProblem& problem, const Hyperparameters& hp) {
    problem.validate();
    const std::size_t n = problem.n(), p = problem.p();
    const std::vector<double>& y = problem.y;

    std::vector<std::vector<double>> knots(p);
    for (std::size_t j = 0; j < p; ++j)
        knots[j] = mars_detail::candidate_knots(problem.x.column(j), p, hp.mars_max_knots);

    num::IncrementalLeastSquares inc(y);
    inc.add_column(std::vector<double>(n, 1.0));
    double tss = inc.rss();

    std::vector<mars_detail::Hinge> hinges;
    std::vector<double> forward_rss_trace{inc.rss()};
    long iterations = 0;

    // max_basis counts the intercept; each accepted step adds a mirror pair.
    while (static_cast<int>(hinges.size()) + 3 <= hp.mars_max_basis) {
        ++iterations;
        double best_gain = 0.0;
        std::size_t best_j = p;
        double best_knot = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (knots[j].empty()) continue;
            std::vector<double> col = problem.x.column(j);
            for (double t : knots[j]) {
                std::vector<double> up(n), down(n);
                for (std::size_t i = 0; i < n; ++i) {
                    double v = col[i] - t;
                    up[i] = v > 0 ? v : 0.0;
                    down[i] = v < 0 ? -v : 0.0;
                }
                double gain = inc.gain_pair(up, down);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_j = j;
                    best_knot = t;
                }
            }
        }
        if (best_j >= p || best_gain <= 1e-12 * std::max(tss, 1.0)) break;

        mars_detail::Hinge up{best_j, +1, best_knot}, down{best_j, -1, best_knot};
        bool added_up = inc.add_column(mars_detail::hinge_column(problem.x, up));
        bool added_down = inc.add_column(mars_detail::hinge_column(problem.x, down));
        if (added_up) hinges.push_back(up);
        if (added_down) hinges.push_back(down);
        if (!added_up && !added_down) break;
        forward_rss_trace.push_back(inc.rss());
    }

    // Backward pruning over refit subsets; the unpruned model is the first
    // candidate, so the returned GCV can only improve on it.
    const double d = hp.mars_gcv_penalty;
    std::vector<std::size_t> current(hinges.size());
    for (std::size_t k = 0; k < hinges.size(); ++k) current[k] = k;

    double full_rss = mars_detail::refit_rss(problem.x, y, hinges, current);
    double forward_gcv = mars_detail::gcv(full_rss, n, current.size() + 1, d);
    double best_gcv = forward_gcv;
    std::vector<std::size_t> best_subset = current;

    while (!current.empty()) {
        double step_best_gcv = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> step_best;
        for (std::size_t drop = 0; drop < current.size(); ++drop) {
            std::vector<std::size_t> candidate;
            for (std::size_t k = 0; k < current.size(); ++k)
                if (k != drop) candidate.push_back(current[k]);
            double rss = mars_detail::refit_rss(problem.x, y, hinges, candidate);
            double g = mars_detail::gcv(rss, n, candidate.size() + 1, d);
            if (g < step_best_gcv) {
                step_best_gcv = g;
                step_best = std::move(candidate);
            }
        }
        current = std::move(step_best);
        if (step_best_gcv < best_gcv) {
            best_gcv = step_best_gcv;
            best_subset = current;
        }
    }

    // Final refit on the winning subset.
    num::DenseMatrix design(n, best_subset.size() + 1);
    for (std::size_t i = 0; i < n; ++i) design(i, 0) = 1.0;
    for (std::size_t k = 0; k < best_subset.size(); ++k) {
        auto col = mars_detail::hinge_column(problem.x, hinges[best_subset[k]]);
        for (std::size_t i = 0; i < n; ++i) design(i, k + 1) = col[i];
    }
    auto sol = num::solve_least_squares(design, y);

    TrainedModel m;
    m.algorithm = Algorithm::mars;
    m.intercept = sol.coefficients[0];
    std::set<std::string> used;
    for (std::size_t k = 0; k < best_subset.size(); ++k) {
        const auto& h = hinges[best_subset[k]];
        HingeBasis hb;
        hb.feature = problem.column_names[h.feature];
        hb.sign = h.sign;
        hb.knot = h.knot;
        hb.coef = sol.coefficients[k + 1];
        m.basis.push_back(std::move(hb));
        used.insert(problem.column_names[h.feature]);
    }
    m.selected_features.assign(used.begin(), used.end());
    m.iterations = iterations;
    m.converged = true;
    m.training_info = {{"gcv", best_gcv},
                       {"forward_gcv", forward_gcv},
                       {"forward_rss_trace", forward_rss_trace},
                       {"rss", sol.rss}};
    return m;
}

}  // namespace swb::reg
