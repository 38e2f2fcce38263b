#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "swb/data/records.hpp"
#include "swb/eval/stats.hpp"
#include "swb/features/feature_matrix.hpp"

namespace swb::eval {

// feature x dimension Pearson table; nullopt where a side is constant.
struct CorrelationTable {
    std::vector<std::string> feature_names;
    std::vector<std::array<std::optional<double>, data::kDimensionCount>> values;
};

inline CorrelationTable feature_correlations(const feat::FeatureMatrix& matrix,
                                             const std::vector<data::SwbLabels>& labels) {
    if (matrix.rows() != labels.size())
        throw ValidationError("feature matrix rows do not align with label rows");
    if (matrix.rows() < 2)
        throw ValidationError("correlation table needs at least 2 rows");
    CorrelationTable table;
    table.feature_names = matrix.column_names;

    std::array<std::vector<double>, data::kDimensionCount> label_cols;
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
        label_cols[d].reserve(labels.size());
        for (const auto& l : labels) label_cols[d].push_back(static_cast<double>(l[d]));
    }

    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        std::vector<double> col = matrix.values.column(j);
        std::array<std::optional<double>, data::kDimensionCount> row;
        for (std::size_t d = 0; d < data::kDimensionCount; ++d)
            row[d] = pearson(col, label_cols[d]);
        table.values.push_back(row);
    }
    return table;
}

enum class Grouping { gender, first_tier_vs_rest };

inline std::string to_string(Grouping g) {
    return g == Grouping::gender ? "gender" : "first_tier_vs_rest";
}

// Two-sided pooled-variance t-test between demographic groups on one
// dimension. Group A is male / first-tier, group B the complement.
inline TTestResult group_ttest(const data::Dataset& ds, Grouping grouping,
                               const std::string& dimension) {
    std::size_t d = data::dimension_index(dimension);
    std::vector<double> a, b;
    for (const auto& r : ds.records) {
        bool in_a = grouping == Grouping::gender
                        ? r.profile.gender == data::Gender::male
                        : r.profile.living_place == data::LivingPlace::first_tier;
        (in_a ? a : b).push_back(static_cast<double>(r.labels[d]));
    }
    if (a.size() < 2 || b.size() < 2)
        throw ValidationError("group t-test: a group has fewer than 2 members (" +
                              to_string(grouping) + ")");
    return two_sample_ttest(a, b);
}

// Pearson(age, score) per dimension.
inline std::array<std::optional<double>, data::kDimensionCount> age_correlations(
    const data::Dataset& ds) {
    std::array<std::optional<double>, data::kDimensionCount> out;
    if (ds.records.size() < 2) {
        out.fill(std::nullopt);
        return out;
    }
    std::vector<double> age;
    age.reserve(ds.records.size());
    for (const auto& r : ds.records) age.push_back(static_cast<double>(r.profile.age));
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
        std::vector<double> score;
        score.reserve(ds.records.size());
        for (const auto& r : ds.records) score.push_back(static_cast<double>(r.labels[d]));
        out[d] = pearson(age, score);
    }
    return out;
}

}  // namespace swb::eval
