#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "swb/error.hpp"
#include "swb/numerics/matrix.hpp"

namespace swb::reg {

struct RegressionProblem {
    num::DenseMatrix x;                      // n rows, p columns (normalized)
    std::vector<double> y;                   // length n
    std::vector<std::string> column_names;   // length p

    std::size_t n() const { return x.rows(); }
    std::size_t p() const { return x.cols(); }

    void validate() const {
        if (x.rows() < 2) throw ValidationError("regression needs at least 2 rows");
        if (x.cols() < 1) throw ValidationError("regression needs at least 1 column");
        if (y.size() != x.rows()) throw ValidationError("y length does not match rows");
        if (column_names.size() != x.cols())
            throw ValidationError("column name count does not match columns");
        if (!x.all_finite()) throw ValidationError("non-finite value in design matrix");
        for (double v : y)
            if (!std::isfinite(v)) throw ValidationError("non-finite value in y");
    }
};

struct Hyperparameters {
    // stepwise: thresholds tight enough that a best-of-p null candidate
    // rarely clears entry (at 0.05 the best of ~20 nulls enters over half
    // the time and support recovery degenerates)
    double stepwise_alpha_enter = 0.001;
    double stepwise_alpha_remove = 0.01;
    // lasso
    int lasso_path_length = 100;
    double lasso_path_ratio = 1e-3;
    double lasso_tol = 1e-6;
    long lasso_max_iter = 10000;
    int lasso_cv_folds = 5;
    // mars
    int mars_max_basis = 21;
    double mars_gcv_penalty = 3.0;
    int mars_max_knots = 32;
    // svr
    double svr_cost = 1.0;
    double svr_epsilon = 0.1;
    std::string svr_kernel = "rbf";  // "linear" or "rbf"
    double svr_gamma = 0.0;          // 0 means 1/p
    double svr_tol = 1e-3;
    long svr_max_iter = 2000000;
};

inline void apply_hyperparameter_overrides(Hyperparameters& hp, const nlohmann::json& j) {
    auto get = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    };
    get("stepwise_alpha_enter", hp.stepwise_alpha_enter);
    get("stepwise_alpha_remove", hp.stepwise_alpha_remove);
    get("lasso_path_length", hp.lasso_path_length);
    get("lasso_path_ratio", hp.lasso_path_ratio);
    get("lasso_tol", hp.lasso_tol);
    get("lasso_max_iter", hp.lasso_max_iter);
    get("lasso_cv_folds", hp.lasso_cv_folds);
    get("mars_max_basis", hp.mars_max_basis);
    get("mars_gcv_penalty", hp.mars_gcv_penalty);
    get("mars_max_knots", hp.mars_max_knots);
    get("svr_cost", hp.svr_cost);
    get("svr_epsilon", hp.svr_epsilon);
    get("svr_kernel", hp.svr_kernel);
    get("svr_gamma", hp.svr_gamma);
    get("svr_tol", hp.svr_tol);
    get("svr_max_iter", hp.svr_max_iter);
}

enum class Algorithm { stepwise, lasso, mars, svr };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::stepwise: return "stepwise";
        case Algorithm::lasso: return "lasso";
        case Algorithm::mars: return "mars";
        default: return "svr";
    }
}

inline Algorithm algorithm_from_string(const std::string& s) {
    if (s == "stepwise") return Algorithm::stepwise;
    if (s == "lasso") return Algorithm::lasso;
    if (s == "mars") return Algorithm::mars;
    if (s == "svr") return Algorithm::svr;
    throw UsageError("unknown algorithm: '" + s + "'");
}

// sign +1: max(0, x - knot); sign -1: max(0, knot - x)
struct HingeBasis {
    std::string feature;
    int sign = 1;
    double knot = 0.0;
    double coef = 0.0;
};

struct SupportVector {
    double coef = 0.0;            // alpha - alpha*
    std::vector<double> x;        // in input_features order
};

// One predictor, any of the four algorithms. Linear family uses
// selected_features + coefficients; MARS uses the hinge basis; SVR keeps its
// support vectors over the full input feature list.
struct TrainedModel {
    Algorithm algorithm = Algorithm::stepwise;
    std::vector<std::string> selected_features;
    std::vector<double> coefficients;
    double intercept = 0.0;

    std::vector<HingeBasis> basis;

    std::string kernel;
    double rbf_gamma = 0.0;
    double epsilon = 0.0;
    double cost = 0.0;
    double bias = 0.0;
    std::vector<std::string> input_features;
    std::vector<SupportVector> support;

    long iterations = 0;
    bool converged = true;
    nlohmann::json training_info = nlohmann::json::object();
};

inline nlohmann::json model_to_json(const TrainedModel& m) {
    nlohmann::json j{{"algorithm", to_string(m.algorithm)},
                     {"selected_features", m.selected_features},
                     {"meta",
                      {{"iterations", m.iterations},
                       {"converged", m.converged},
                       {"training_info", m.training_info}}}};
    switch (m.algorithm) {
        case Algorithm::stepwise:
        case Algorithm::lasso: {
            nlohmann::json coefs = nlohmann::json::object();
            for (std::size_t i = 0; i < m.selected_features.size(); ++i)
                coefs[m.selected_features[i]] = m.coefficients[i];
            j["intercept"] = m.intercept;
            j["coefficients"] = coefs;
            break;
        }
        case Algorithm::mars: {
            nlohmann::json basis = nlohmann::json::array();
            for (const auto& b : m.basis)
                basis.push_back({{"feature", b.feature},
                                 {"sign", b.sign},
                                 {"knot", b.knot},
                                 {"coef", b.coef}});
            j["intercept"] = m.intercept;
            j["basis"] = basis;
            break;
        }
        case Algorithm::svr: {
            nlohmann::json sv = nlohmann::json::array();
            for (const auto& s : m.support) sv.push_back({{"coef", s.coef}, {"x", s.x}});
            j["kernel"] = m.kernel;
            j["gamma"] = m.rbf_gamma;
            j["epsilon"] = m.epsilon;
            j["cost"] = m.cost;
            j["bias"] = m.bias;
            j["input_features"] = m.input_features;
            j["support_vectors"] = sv;
            break;
        }
    }
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    TrainedModel m;
    m.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    m.selected_features = j.at("selected_features").get<std::vector<std::string>>();
    const auto& meta = j.at("meta");
    m.iterations = meta.at("iterations").get<long>();
    m.converged = meta.at("converged").get<bool>();
    m.training_info = meta.at("training_info");
    switch (m.algorithm) {
        case Algorithm::stepwise:
        case Algorithm::lasso: {
            m.intercept = j.at("intercept").get<double>();
            const auto& coefs = j.at("coefficients");
            for (const auto& name : m.selected_features)
                m.coefficients.push_back(coefs.at(name).get<double>());
            break;
        }
        case Algorithm::mars: {
            m.intercept = j.at("intercept").get<double>();
            for (const auto& b : j.at("basis")) {
                HingeBasis hb;
                hb.feature = b.at("feature").get<std::string>();
                hb.sign = b.at("sign").get<int>();
                hb.knot = b.at("knot").get<double>();
                hb.coef = b.at("coef").get<double>();
                m.basis.push_back(std::move(hb));
            }
            break;
        }
        case Algorithm::svr: {
            m.kernel = j.at("kernel").get<std::string>();
            m.rbf_gamma = j.at("gamma").get<double>();
            m.epsilon = j.at("epsilon").get<double>();
            m.cost = j.at("cost").get<double>();
            m.bias = j.at("bias").get<double>();
            m.input_features = j.at("input_features").get<std::vector<std::string>>();
            for (const auto& s : j.at("support_vectors")) {
                SupportVector sv;
                sv.coef = s.at("coef").get<double>();
                sv.x = s.at("x").get<std::vector<double>>();
                m.support.push_back(std::move(sv));
            }
            break;
        }
    }
    return m;
}

namespace detail {

inline std::vector<std::size_t> column_indices(const std::vector<std::string>& have,
                                               const std::vector<std::string>& want) {
    std::vector<std::size_t> idx;
    idx.reserve(want.size());
    for (const auto& name : want) {
        bool found = false;
        for (std::size_t j = 0; j < have.size(); ++j) {
            if (have[j] == name) {
                idx.push_back(j);
                found = true;
                break;
            }
        }
        if (!found) throw ValidationError("prediction input is missing feature '" + name + "'");
    }
    return idx;
}

inline double kernel_eval(const std::string& kernel, double gamma, const double* a,
                          const double* b, std::size_t dim) {
    if (kernel == "linear") {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += a[k] * b[k];
        return s;
    }
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        double d = a[k] - b[k];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

}  // namespace detail

// Deterministic prediction; X must cover the model's features by name.
inline std::vector<double> predict(const TrainedModel& m, const num::DenseMatrix& x,
                                   const std::vector<std::string>& column_names) {
    std::vector<double> out(x.rows(), m.intercept);
    switch (m.algorithm) {
        case Algorithm::stepwise:
        case Algorithm::lasso: {
            auto idx = detail::column_indices(column_names, m.selected_features);
            for (std::size_t i = 0; i < x.rows(); ++i) {
                double s = m.intercept;
                for (std::size_t k = 0; k < idx.size(); ++k)
                    s += m.coefficients[k] * x(i, idx[k]);
                out[i] = s;
            }
            break;
        }
        case Algorithm::mars: {
            std::vector<std::string> feats;
            for (const auto& b : m.basis) feats.push_back(b.feature);
            auto idx = detail::column_indices(column_names, feats);
            for (std::size_t i = 0; i < x.rows(); ++i) {
                double s = m.intercept;
                for (std::size_t k = 0; k < m.basis.size(); ++k) {
                    const auto& b = m.basis[k];
                    double v = x(i, idx[k]);
                    double h = b.sign > 0 ? v - b.knot : b.knot - v;
                    if (h > 0) s += b.coef * h;
                }
                out[i] = s;
            }
            break;
        }
        case Algorithm::svr: {
            auto idx = detail::column_indices(column_names, m.input_features);
            const std::size_t dim = idx.size();
            std::vector<double> row(dim);
            for (std::size_t i = 0; i < x.rows(); ++i) {
                for (std::size_t k = 0; k < dim; ++k) row[k] = x(i, idx[k]);
                double s = m.bias;
                for (const auto& sv : m.support)
                    s += sv.coef *
                         detail::kernel_eval(m.kernel, m.rbf_gamma, sv.x.data(), row.data(), dim);
                out[i] = s;
            }
            break;
        }
    }
    return out;
}

inline std::vector<double> predict(const TrainedModel& m, const RegressionProblem& problem) {
    return predict(m, problem.x, problem.column_names);
}

}  // namespace swb::reg
