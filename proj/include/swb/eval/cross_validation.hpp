#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swb/data/records.hpp"
#include "swb/eval/folds.hpp"
#include "swb/eval/stats.hpp"
#include "swb/features/feature_matrix.hpp"
#include "swb/features/normalization.hpp"
#include "swb/regress/lasso.hpp"
#include "swb/regress/mars.hpp"
#include "swb/regress/problem.hpp"
#include "swb/regress/stepwise.hpp"
#include "swb/regress/svr.hpp"

namespace swb::eval {

struct EvalResult {
    std::string dimension;                       // "P.A." etc.
    std::string families;                        // "D+B+L" label
    reg::Algorithm algorithm = reg::Algorithm::stepwise;
    std::optional<double> gamma_pooled;
    std::vector<std::optional<double>> gamma_per_fold;
    std::vector<double> pooled_predictions;      // dataset row order
    std::vector<double> true_labels;
    std::vector<std::string> fold_models;        // serialized per-fold models
    double mean_selected = 0.0;                  // avg selected features per fold
    bool converged = true;
};

inline reg::TrainedModel fit_algorithm(reg::Algorithm algo,
                                       const reg::RegressionProblem& problem,
                                       const reg::Hyperparameters& hp, std::uint64_t seed) {
    switch (algo) {
        case reg::Algorithm::stepwise: return reg::fit_stepwise(problem, hp);
        case reg::Algorithm::lasso: return reg::fit_lasso(problem, hp, seed);
        case reg::Algorithm::mars: return reg::fit_mars(problem, hp);
        default: return reg::fit_svr(problem, hp);
    }
}

namespace cv_detail {

inline feat::FeatureMatrix select_rows(const feat::FeatureMatrix& fm,
                                       const std::vector<std::size_t>& rows) {
    feat::FeatureMatrix out;
    out.column_names = fm.column_names;
    out.window = fm.window;
    out.values = num::DenseMatrix(rows.size(), fm.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.user_ids.push_back(fm.user_ids[rows[i]]);
        for (std::size_t j = 0; j < fm.cols(); ++j) out.values(i, j) = fm.values(rows[i], j);
    }
    return out;
}

}  // namespace cv_detail

// Per fold: fit min-max normalization on the training rows only, normalize
// both sides, train, predict the held-out rows. The headline gamma is the
// Pearson correlation over all pooled out-of-fold predictions.
inline EvalResult cross_validate(const feat::FeatureMatrix& matrix,
                                 const std::vector<double>& y, const std::string& dimension,
                                 const std::string& families_label, reg::Algorithm algorithm,
                                 const reg::Hyperparameters& hp, const FoldPlan& folds,
                                 std::uint64_t seed) {
    EvalResult res;
    res.dimension = dimension;
    res.families = families_label;
    res.algorithm = algorithm;
    res.true_labels = y;
    res.pooled_predictions.assign(y.size(), 0.0);

    for (int f = 0; f < folds.k; ++f) {
        auto train = folds.train_rows(f);
        auto test = folds.test_rows(f);
        feat::FeatureMatrix train_raw = cv_detail::select_rows(matrix, train);
        feat::FeatureMatrix test_raw = cv_detail::select_rows(matrix, test);

        std::vector<std::size_t> all_train(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) all_train[i] = i;
        feat::NormalizationParams norm = feat::fit_normalization(train_raw, all_train);
        feat::FeatureMatrix train_x = feat::apply_normalization(train_raw, norm);
        feat::FeatureMatrix test_x = feat::apply_normalization(test_raw, norm);

        reg::RegressionProblem problem;
        problem.x = train_x.values;
        problem.column_names = train_x.column_names;
        problem.y.reserve(train.size());
        for (std::size_t r : train) problem.y.push_back(y[r]);

        reg::TrainedModel model =
            fit_algorithm(algorithm, problem, hp, num::mix_seed({seed, 7, static_cast<std::uint64_t>(f)}));
        res.mean_selected += static_cast<double>(model.selected_features.size());
        res.converged = res.converged && model.converged;
        res.fold_models.push_back(reg::model_to_json(model).dump());

        std::vector<double> pred = reg::predict(model, test_x.values, test_x.column_names);
        std::vector<double> truth;
        for (std::size_t i = 0; i < test.size(); ++i) {
            res.pooled_predictions[test[i]] = pred[i];
            truth.push_back(y[test[i]]);
        }
        res.gamma_per_fold.push_back(truth.size() >= 2 ? pearson(pred, truth) : std::nullopt);
    }
    res.mean_selected /= static_cast<double>(folds.k);
    res.gamma_pooled = pearson(res.pooled_predictions, res.true_labels);
    return res;
}

// Dataset-level convenience: extracts features, pulls the dimension's label
// column, and runs the fold loop above.
inline EvalResult cross_validate(const data::Dataset& dataset, const std::string& dimension,
                                 const std::set<feat::Family>& families,
                                 reg::Algorithm algorithm, const reg::Hyperparameters& hp,
                                 const feat::WindowSpec& window, const lex::Lexicon* lexicon,
                                 const FoldPlan& folds, std::uint64_t seed) {
    std::size_t d = data::dimension_index(dimension);
    feat::FeatureMatrix matrix = feat::build_matrix(dataset, families, window, lexicon);
    std::vector<double> y;
    y.reserve(dataset.records.size());
    for (const auto& r : dataset.records) y.push_back(static_cast<double>(r.labels[d]));
    return cross_validate(matrix, y, dimension, feat::family_set_label(families), algorithm,
                          hp, folds, seed);
}

}  // namespace swb::eval
