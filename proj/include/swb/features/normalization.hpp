#pragma once

#include <algorithm>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "swb/error.hpp"
#include "swb/features/feature_matrix.hpp"

namespace swb::feat {

// Per-column min/max learned from a row subset (the training fold).
struct NormalizationParams {
    std::vector<std::string> column_names;
    std::vector<double> min_value;
    std::vector<double> max_value;
};

inline NormalizationParams fit_normalization(const FeatureMatrix& fm,
                                             const std::vector<std::size_t>& rows) {
    if (rows.empty()) throw ValidationError("normalization fit needs at least one row");
    NormalizationParams p;
    p.column_names = fm.column_names;
    p.min_value.assign(fm.cols(), std::numeric_limits<double>::infinity());
    p.max_value.assign(fm.cols(), -std::numeric_limits<double>::infinity());
    for (std::size_t r : rows) {
        for (std::size_t j = 0; j < fm.cols(); ++j) {
            double v = fm.values(r, j);
            p.min_value[j] = std::min(p.min_value[j], v);
            p.max_value[j] = std::max(p.max_value[j], v);
        }
    }
    return p;
}

// x' = (x - min) / (max - min), clamped to [0,1]. Constant columns map to 0.
inline FeatureMatrix apply_normalization(const FeatureMatrix& fm,
                                         const NormalizationParams& p) {
    if (p.column_names != fm.column_names)
        throw ValidationError("normalization params do not match matrix columns");
    FeatureMatrix out = fm;
    for (std::size_t j = 0; j < fm.cols(); ++j) {
        double lo = p.min_value[j], hi = p.max_value[j];
        double span = hi - lo;
        for (std::size_t i = 0; i < fm.rows(); ++i) {
            double v = span > 0 ? (fm.values(i, j) - lo) / span : 0.0;
            out.values(i, j) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

inline nlohmann::json normalization_to_json(const NormalizationParams& p) {
    nlohmann::json cols = nlohmann::json::array();
    for (std::size_t j = 0; j < p.column_names.size(); ++j)
        cols.push_back({{"name", p.column_names[j]},
                        {"min", p.min_value[j]},
                        {"max", p.max_value[j]}});
    return nlohmann::json{{"schema", "swb-normalization/1"}, {"columns", cols}};
}

inline NormalizationParams normalization_from_json(const nlohmann::json& j) {
    NormalizationParams p;
    for (const auto& c : j.at("columns")) {
        p.column_names.push_back(c.at("name").get<std::string>());
        p.min_value.push_back(c.at("min").get<double>());
        p.max_value.push_back(c.at("max").get<double>());
    }
    return p;
}

inline void write_normalization(const NormalizationParams& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open normalization file for writing: " + path);
    out << normalization_to_json(p).dump(2) << '\n';
}

inline NormalizationParams load_normalization(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open normalization file: " + path);
    nlohmann::json j;
    in >> j;
    return normalization_from_json(j);
}

}  // namespace swb::feat
