#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "swb/numerics/least_squares.hpp"
#include "swb/numerics/special_functions.hpp"
#include "swb/regress/ols.hpp"
#include "swb/regress/problem.hpp"

namespace swb::reg {

namespace stepwise_detail {

// Partial-F p-value of moving between a reduced and a full model differing by
// one column.
inline double partial_f_p(double rss_reduced, double rss_full, std::size_t dof_full) {
    if (dof_full < 1) return 1.0;
    if (rss_full <= 0.0) return rss_reduced > rss_full ? 0.0 : 1.0;
    double f = (rss_reduced - rss_full) / (rss_full / static_cast<double>(dof_full));
    if (f < 0) f = 0;
    return num::f_test_p_value(f, static_cast<double>(dof_full));
}

inline double rss_of(const RegressionProblem& problem, const std::vector<std::size_t>& cols) {
    return fit_ols(problem, cols).rss;
}

}  // namespace stepwise_detail

// Bidirectional stepwise selection on partial-F tests: each round adds the
// best out-of-model column with p < alpha_enter, then drops in-model columns
// with p > alpha_remove until none remain. Columns dropped in a round cannot
// re-enter in the next round's add step, which blocks add/remove cycles.
inline TrainedModel fit_stepwise(const RegressionProblem& problem, const Hyperparameters& hp) {
    problem.validate();
    const std::size_t n = problem.n(), p = problem.p();

    std::vector<std::size_t> selected;
    std::set<std::size_t> just_removed;
    double current_rss = 0.0;
    {
        double m = num::mean(problem.y);
        for (double v : problem.y) current_rss += (v - m) * (v - m);
    }

    long iterations = 0;
    const long max_rounds = static_cast<long>(2 * p + 16);
    bool moved = true;
    while (moved && iterations < max_rounds) {
        ++iterations;
        moved = false;

        // Add step: candidates scanned against an orthonormal basis of the
        // current design, so each scan is O(n * |selected|) per column.
        {
            num::IncrementalLeastSquares inc(problem.y);
            inc.add_column(std::vector<double>(n, 1.0));
            for (std::size_t j : selected) inc.add_column(problem.x.column(j));

            const std::size_t dof_full = n > selected.size() + 2 ? n - selected.size() - 2 : 0;
            double best_p = 1.0;
            std::size_t best_j = p;
            double best_rss = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                if (std::find(selected.begin(), selected.end(), j) != selected.end()) continue;
                if (just_removed.count(j)) continue;
                double gain = inc.gain(problem.x.column(j));
                if (gain <= 0) continue;  // collinear with current design
                double rss_new = std::max(inc.rss() - gain, 0.0);
                double pv = stepwise_detail::partial_f_p(inc.rss(), rss_new, dof_full);
                if (pv < best_p || (pv == best_p && best_j != p && j < best_j)) {
                    best_p = pv;
                    best_j = j;
                    best_rss = rss_new;
                }
            }
            if (best_j < p && best_p < hp.stepwise_alpha_enter) {
                selected.push_back(best_j);
                current_rss = best_rss;
                moved = true;
            }
        }
        just_removed.clear();

        // Remove step: drop the worst offender until all survivors pass.
        bool removed = true;
        while (removed && !selected.empty()) {
            removed = false;
            const std::size_t dof_full = n > selected.size() + 1 ? n - selected.size() - 1 : 0;
            double worst_p = -1.0;
            std::size_t worst_k = selected.size();
            double worst_rss = 0.0;
            for (std::size_t k = 0; k < selected.size(); ++k) {
                std::vector<std::size_t> reduced;
                for (std::size_t k2 = 0; k2 < selected.size(); ++k2)
                    if (k2 != k) reduced.push_back(selected[k2]);
                double rss_reduced = stepwise_detail::rss_of(problem, reduced);
                double pv = stepwise_detail::partial_f_p(rss_reduced, current_rss, dof_full);
                if (pv > worst_p) {
                    worst_p = pv;
                    worst_k = k;
                    worst_rss = rss_reduced;
                }
            }
            if (worst_k < selected.size() && worst_p > hp.stepwise_alpha_remove) {
                just_removed.insert(selected[worst_k]);
                selected.erase(selected.begin() + static_cast<long>(worst_k));
                current_rss = worst_rss;
                moved = true;
                removed = true;
            }
        }
    }

    std::sort(selected.begin(), selected.end());
    OlsFit fit = fit_ols(problem, selected);
    TrainedModel model = linear_model_from_fit(problem, fit, Algorithm::stepwise);
    model.iterations = iterations;
    model.converged = iterations < max_rounds;
    model.training_info = {{"rss", fit.rss},
                           {"alpha_enter", hp.stepwise_alpha_enter},
                           {"alpha_remove", hp.stepwise_alpha_remove}};
    return model;
}

}  // namespace swb::reg
