#pragma once

#include <string>
#include <vector>

#include "swb/numerics/least_squares.hpp"
#include "swb/regress/problem.hpp"

namespace swb::reg {

struct OlsFit {
    std::vector<std::size_t> columns;     // problem column indices used
    std::vector<double> coefficients;     // aligned with columns
    double intercept = 0.0;
    double rss = 0.0;
    std::size_t dof = 0;                  // n - (columns + intercept)
};

// Least squares on an intercept plus the given column subset. Rank
// deficiency surfaces as a NumericError naming the offending columns.
inline OlsFit fit_ols(const RegressionProblem& problem,
                      const std::vector<std::size_t>& columns) {
    problem.validate();
    const std::size_t n = problem.n(), m = columns.size() + 1;
    num::DenseMatrix design(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        for (std::size_t k = 0; k < columns.size(); ++k)
            design(i, k + 1) = problem.x(i, columns[k]);
    }
    num::LeastSquaresSolution sol;
    try {
        sol = num::solve_least_squares(design, problem.y);
    } catch (const num::RankDeficientError& e) {
        std::string names;
        for (std::size_t d : e.dependent_columns()) {
            if (!names.empty()) names += ", ";
            names += d == 0 ? "intercept" : problem.column_names[columns[d - 1]];
        }
        throw NumericError("rank-deficient design over columns {" + names +
                           "} (numerical rank " + std::to_string(e.numerical_rank()) + ")");
    }
    OlsFit fit;
    fit.columns = columns;
    fit.intercept = sol.coefficients[0];
    fit.coefficients.assign(sol.coefficients.begin() + 1, sol.coefficients.end());
    fit.rss = sol.rss;
    fit.dof = sol.dof;
    return fit;
}

inline TrainedModel linear_model_from_fit(const RegressionProblem& problem, const OlsFit& fit,
                                          Algorithm tag) {
    TrainedModel m;
    m.algorithm = tag;
    m.intercept = fit.intercept;
    for (std::size_t k = 0; k < fit.columns.size(); ++k) {
        m.selected_features.push_back(problem.column_names[fit.columns[k]]);
        m.coefficients.push_back(fit.coefficients[k]);
    }
    return m;
}

}  // namespace swb::reg
