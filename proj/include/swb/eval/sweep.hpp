#pragma once

#include <atomic>
#include <cstdio>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "swb/data/records.hpp"
#include "swb/eval/cross_validation.hpp"
#include "swb/features/registry.hpp"

namespace swb::eval {

struct SweepCell {
    std::string dimension;
    std::string families;
    std::string algorithm;
    std::optional<double> gamma;
    std::vector<std::optional<double>> gamma_per_fold;
    double mean_selected = 0.0;
    bool converged = true;
    bool baseline = false;  // the D-only feature set
};

struct BestCell {
    std::string families;
    std::string algorithm;
    std::optional<double> gamma;
};

struct SweepReport {
    std::uint64_t seed = 0;
    int folds = 5;
    double window_before_days = 7.0;
    double window_after_days = 7.0;
    std::vector<std::string> combo_labels;   // render order
    std::vector<std::string> algorithms;     // render order
    std::vector<SweepCell> cells;            // combo-major, algorithm, dimension
    std::array<BestCell, data::kDimensionCount> best;
};

inline std::vector<std::set<feat::Family>> default_family_combos() {
    using feat::Family;
    return {{Family::D},
            {Family::B},
            {Family::L},
            {Family::D, Family::B},
            {Family::D, Family::L},
            {Family::B, Family::L},
            {Family::D, Family::B, Family::L}};
}

inline const std::vector<reg::Algorithm>& all_algorithms() {
    static const std::vector<reg::Algorithm> algos = {
        reg::Algorithm::stepwise, reg::Algorithm::lasso, reg::Algorithm::mars,
        reg::Algorithm::svr};
    return algos;
}

// Full grid: dimensions x feature-set combos x algorithms, one 5-fold CV per
// cell. Cells run on `jobs` workers; results land in a fixed slot per cell so
// the report does not depend on scheduling.
inline SweepReport run_sweep(const data::Dataset& dataset,
                             const std::vector<std::set<feat::Family>>& combos,
                             const std::vector<reg::Algorithm>& algorithms,
                             const reg::Hyperparameters& hp, const feat::WindowSpec& window,
                             const lex::Lexicon* lexicon, int folds_k, std::uint64_t seed,
                             unsigned jobs = 1) {
    if (combos.empty()) throw ValidationError("sweep needs at least one feature combo");
    if (algorithms.empty()) throw ValidationError("sweep needs at least one algorithm");

    SweepReport report;
    report.seed = seed;
    report.folds = folds_k;
    report.window_before_days = static_cast<double>(window.before) / 86400.0;
    report.window_after_days = static_cast<double>(window.after) / 86400.0;
    for (const auto& c : combos) report.combo_labels.push_back(feat::family_set_label(c));
    for (auto a : algorithms) report.algorithms.push_back(reg::to_string(a));

    FoldPlan folds = make_folds(dataset.records.size(), folds_k, num::mix_seed({seed, 4}));

    // One extraction per combo, shared across its cells.
    std::vector<feat::FeatureMatrix> matrices;
    matrices.reserve(combos.size());
    for (const auto& c : combos)
        matrices.push_back(feat::build_matrix(dataset, c, window, lexicon));

    std::array<std::vector<double>, data::kDimensionCount> labels;
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
        labels[d].reserve(dataset.records.size());
        for (const auto& r : dataset.records)
            labels[d].push_back(static_cast<double>(r.labels[d]));
    }

    struct Task {
        std::size_t combo, algo, dim;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < combos.size(); ++c)
        for (std::size_t a = 0; a < algorithms.size(); ++a)
            for (std::size_t d = 0; d < data::kDimensionCount; ++d) tasks.push_back({c, a, d});

    report.cells.resize(tasks.size());

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        while (true) {
            std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error) return;
            }
            const Task& task = tasks[t];
            try {
                std::uint64_t cell_seed = num::mix_seed(
                    {seed, 3, task.combo, task.algo, task.dim});
                EvalResult r = cross_validate(
                    matrices[task.combo], labels[task.dim], data::dimension_ids()[task.dim],
                    report.combo_labels[task.combo], algorithms[task.algo], hp, folds,
                    cell_seed);
                SweepCell cell;
                cell.dimension = r.dimension;
                cell.families = r.families;
                cell.algorithm = reg::to_string(algorithms[task.algo]);
                cell.gamma = r.gamma_pooled;
                cell.gamma_per_fold = r.gamma_per_fold;
                cell.mean_selected = r.mean_selected;
                cell.converged = r.converged;
                cell.baseline = cell.families == "D";
                report.cells[t] = std::move(cell);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    unsigned n_workers = std::max(1u, jobs);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Best per dimension; ties prefer fewer selected features, then the
    // fixed algorithm order stepwise < lasso < mars < svr, then combo order.
    auto algo_rank = [](const std::string& a) {
        if (a == "stepwise") return 0;
        if (a == "lasso") return 1;
        if (a == "mars") return 2;
        return 3;
    };
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
        const SweepCell* winner = nullptr;
        for (const auto& cell : report.cells) {
            if (cell.dimension != data::dimension_ids()[d] || !cell.gamma) continue;
            if (!winner) {
                winner = &cell;
                continue;
            }
            double g = *cell.gamma, wg = *winner->gamma;
            bool better = g > wg;
            if (g == wg) {
                if (cell.mean_selected < winner->mean_selected)
                    better = true;
                else if (cell.mean_selected == winner->mean_selected &&
                         algo_rank(cell.algorithm) < algo_rank(winner->algorithm))
                    better = true;
            }
            if (better) winner = &cell;
        }
        if (winner)
            report.best[d] = {winner->families, winner->algorithm, winner->gamma};
    }
    return report;
}

// ---- serialization ----

inline nlohmann::json sweep_report_to_json(const SweepReport& r) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : r.cells) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& g : c.gamma_per_fold)
            folds.push_back(g ? nlohmann::json(*g) : nlohmann::json(nullptr));
        cells.push_back({{"dimension", c.dimension},
                         {"features", c.families},
                         {"algorithm", c.algorithm},
                         {"gamma", c.gamma ? nlohmann::json(*c.gamma) : nlohmann::json(nullptr)},
                         {"gamma_per_fold", folds},
                         {"mean_selected", c.mean_selected},
                         {"converged", c.converged},
                         {"baseline", c.baseline}});
    }
    nlohmann::json best = nlohmann::json::object();
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
        const auto& b = r.best[d];
        best[data::dimension_ids()[d]] = {
            {"features", b.families},
            {"algorithm", b.algorithm},
            {"gamma", b.gamma ? nlohmann::json(*b.gamma) : nlohmann::json(nullptr)}};
    }
    return nlohmann::json{
        {"schema", "swb-sweep-report/1"},
        {"seed", r.seed},
        {"folds", r.folds},
        {"window", {{"before_days", r.window_before_days}, {"after_days", r.window_after_days}}},
        {"combos", r.combo_labels},
        {"algorithms", r.algorithms},
        {"dimensions", data::dimension_ids()},
        {"cells", cells},
        {"best_per_dimension", best}};
}

inline SweepReport sweep_report_from_json(const nlohmann::json& j) {
    if (j.at("schema").get<std::string>() != "swb-sweep-report/1")
        throw ParseError("unsupported report schema");
    SweepReport r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.folds = j.at("folds").get<int>();
    r.window_before_days = j.at("window").at("before_days").get<double>();
    r.window_after_days = j.at("window").at("after_days").get<double>();
    r.combo_labels = j.at("combos").get<std::vector<std::string>>();
    r.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    for (const auto& jc : j.at("cells")) {
        SweepCell c;
        c.dimension = jc.at("dimension").get<std::string>();
        c.families = jc.at("features").get<std::string>();
        c.algorithm = jc.at("algorithm").get<std::string>();
        if (!jc.at("gamma").is_null()) c.gamma = jc.at("gamma").get<double>();
        for (const auto& g : jc.at("gamma_per_fold"))
            c.gamma_per_fold.push_back(g.is_null() ? std::optional<double>{}
                                                   : std::optional<double>{g.get<double>()});
        c.mean_selected = jc.at("mean_selected").get<double>();
        c.converged = jc.at("converged").get<bool>();
        c.baseline = jc.at("baseline").get<bool>();
        r.cells.push_back(std::move(c));
    }
    const auto& best = j.at("best_per_dimension");
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
        const auto& key = data::dimension_ids()[d];
        if (!best.contains(key)) continue;
        BestCell b;
        b.families = best.at(key).at("features").get<std::string>();
        b.algorithm = best.at(key).at("algorithm").get<std::string>();
        if (!best.at(key).at("gamma").is_null())
            b.gamma = best.at(key).at("gamma").get<double>();
        r.best[d] = std::move(b);
    }
    return r;
}

// Plain-text grid: dimensions as columns, feature-set x algorithm as rows,
// the D-only baseline block at the bottom, then the best-per-dimension row.
inline std::string render_report_text(const SweepReport& r) {
    auto cell_str = [](const std::optional<double>& g) {
        char buf[16];
        if (g)
            std::snprintf(buf, sizeof(buf), "%8.3f", *g);
        else
            std::snprintf(buf, sizeof(buf), "%8s", "NA");
        return std::string(buf);
    };

    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "Pooled Pearson gamma by SWB dimension (folds=%d, seed=%llu, window=-%gd/+%gd)\n",
                  r.folds, static_cast<unsigned long long>(r.seed), r.window_before_days,
                  r.window_after_days);
    out += line;

    const std::string rule(24 + 8 * data::kDimensionCount, '-');
    std::snprintf(line, sizeof(line), "%-13s %-10s", "Feature Set", "Algorithm");
    out += line;
    for (const auto& dim : data::dimension_ids()) {
        std::snprintf(line, sizeof(line), "%8s", dim.c_str());
        out += line;
    }
    out += '\n';
    out += rule + '\n';

    auto find_cell = [&](const std::string& combo, const std::string& algo,
                         const std::string& dim) -> const SweepCell* {
        for (const auto& c : r.cells)
            if (c.families == combo && c.algorithm == algo && c.dimension == dim) return &c;
        return nullptr;
    };

    auto emit_rows = [&](bool baseline_block) {
        for (const auto& combo : r.combo_labels) {
            if ((combo == "D") != baseline_block) continue;
            for (const auto& algo : r.algorithms) {
                std::snprintf(line, sizeof(line), "%-13s %-10s", combo.c_str(), algo.c_str());
                out += line;
                for (const auto& dim : data::dimension_ids()) {
                    const SweepCell* c = find_cell(combo, algo, dim);
                    out += c ? cell_str(c->gamma) : cell_str(std::nullopt);
                }
                out += '\n';
            }
        }
    };

    emit_rows(false);
    bool has_baseline = false;
    for (const auto& combo : r.combo_labels) has_baseline = has_baseline || combo == "D";
    if (has_baseline) {
        out += "Feature Set Baseline\n";
        emit_rows(true);
    }
    out += rule + '\n';
    std::snprintf(line, sizeof(line), "%-24s", "Best Sensing Result");
    out += line;
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) out += cell_str(r.best[d].gamma);
    out += '\n';
    for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
        const auto& b = r.best[d];
        if (!b.gamma) continue;
        std::snprintf(line, sizeof(line), "  %s best: %.3f (%s, %s)\n",
                      data::dimension_ids()[d].c_str(), *b.gamma, b.families.c_str(),
                      b.algorithm.c_str());
        out += line;
    }
    return out;
}

}  // namespace swb::eval
