#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swb/swb.hpp"

namespace swb::cli {

// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numerical non-convergence under --strict.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

namespace cli_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

// Overlay config-file values as extra argv entries for flags the user did
// not pass explicitly; explicit flags always win.
inline void overlay_config(std::vector<std::string>& args, const nlohmann::json& config) {
    auto has_flag = [&args](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    for (auto it = config.begin(); it != config.end(); ++it) {
        if (it.key() == "hyperparameters") continue;
        std::string flag = "--" + it.key();
        if (has_flag(flag)) continue;
        if (it.value().is_boolean()) {
            if (it.value().get<bool>()) args.push_back(flag);
        } else if (it.value().is_string()) {
            args.push_back(flag + "=" + it.value().get<std::string>());
        } else {
            args.push_back(flag + "=" + it.value().dump());
        }
    }
}

inline nlohmann::json load_config_arg(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
        if (!path.empty()) {
            std::ifstream in(path);
            if (!in) throw Error("cannot open config file: " + path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ParseError("bad config file: " + std::string(e.what()));
            }
            return j;
        }
    }
    return nlohmann::json::object();
}

inline std::optional<lex::Lexicon> maybe_load_lexicon(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return lex::parse_lexicon(path);
}

inline std::vector<std::set<feat::Family>> parse_combo_list(const std::string& spec) {
    if (spec.empty() || spec == "all") return eval::default_family_combos();
    std::vector<std::set<feat::Family>> combos;
    for (const auto& part : split(spec, ',')) {
        if (part.empty()) continue;
        combos.push_back(feat::parse_family_set(part));
    }
    if (combos.empty()) throw UsageError("no feature combos in '" + spec + "'");
    return combos;
}

inline std::vector<reg::Algorithm> parse_algorithm_list(const std::string& spec) {
    if (spec.empty() || spec == "all") return eval::all_algorithms();
    std::vector<reg::Algorithm> algos;
    for (const auto& part : split(spec, ','))
        if (!part.empty()) algos.push_back(reg::algorithm_from_string(part));
    if (algos.empty()) throw UsageError("no algorithms in '" + spec + "'");
    return algos;
}

inline std::string format_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", p);
    return buf;
}

}  // namespace cli_detail

inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"SWB sensing pipeline: synthesize corpora, extract features, train and "
                 "evaluate well-being predictors"};
    app.require_subcommand(1);

    nlohmann::json file_config;
    try {
        file_config = cli_detail::load_config_arg(args);
        cli_detail::overlay_config(args, file_config);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file with flag defaults");

    auto add_config_opt = [&config_path](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file with flag defaults");
    };

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "Write a synthetic dataset");
    add_config_opt(gen);
    std::string gen_out, gen_lexicon, gen_gconfig;
    std::uint64_t gen_seed = 0;
    long long gen_n = -1;
    bool gen_marginals = false;
    double gen_noise = -1.0;
    gen->add_option("--out", gen_out, "output dataset path (.jsonl)")->required();
    gen->add_option("--gen-config", gen_gconfig, "generator config JSON");
    gen->add_option("--lexicon", gen_lexicon, "lexicon .dic used for post text");
    gen->add_option("--n", gen_n, "number of users (overrides generator config)");
    gen->add_option("--seed", gen_seed, "generator seed")->envname("SWB_SEED");
    gen->add_flag("--paper-marginals", gen_marginals,
                  "use the documented demographic marginals");
    gen->add_option("--noise-sigma", gen_noise, "label noise sigma override");

    // ---- extract ----
    auto* ext = app.add_subcommand("extract", "Extract a feature matrix to CSV");
    add_config_opt(ext);
    std::string ext_data, ext_lexicon, ext_families = "D,B,L", ext_out, ext_norm_out;
    double ext_before = 7.0, ext_after = 7.0;
    ext->add_option("--data", ext_data, "dataset .jsonl")->required();
    ext->add_option("--lexicon", ext_lexicon, "lexicon .dic (required for family L)");
    ext->add_option("--families", ext_families, "feature families, e.g. D,B,L or D+B");
    ext->add_option("--window-before", ext_before, "window days before survey");
    ext->add_option("--window-after", ext_after, "window days after survey");
    ext->add_option("--out", ext_out, "output CSV path")->required();
    ext->add_option("--norm-out", ext_norm_out, "also write min-max params (fit on all rows)");

    // ---- sweep ----
    auto* swp = app.add_subcommand("sweep", "Evaluate the full feature-set x algorithm grid");
    add_config_opt(swp);
    std::string swp_data, swp_lexicon, swp_families = "all", swp_algos = "all", swp_outdir = ".";
    double swp_before = 7.0, swp_after = 7.0;
    int swp_folds = 5;
    unsigned swp_jobs = 1;
    std::uint64_t swp_seed = 0;
    bool swp_strict = false;
    swp->add_option("--data", swp_data, "dataset .jsonl")->required();
    swp->add_option("--lexicon", swp_lexicon, "lexicon .dic (needed when L is swept)");
    swp->add_option("--families", swp_families,
                    "comma-separated combos (e.g. D,B+L,D+B+L) or 'all'");
    swp->add_option("--algorithms", swp_algos,
                    "comma-separated algorithms (stepwise,lasso,mars,svr) or 'all'");
    swp->add_option("--folds", swp_folds, "cross-validation folds");
    swp->add_option("--seed", swp_seed, "fold/CV seed")->envname("SWB_SEED");
    swp->add_option("--jobs", swp_jobs, "parallel grid-cell workers");
    swp->add_option("--window-before", swp_before, "window days before survey");
    swp->add_option("--window-after", swp_after, "window days after survey");
    swp->add_option("--out-dir", swp_outdir, "directory for report.json / report.txt");
    swp->add_flag("--strict", swp_strict, "exit 3 when any cell failed to converge");

    // ---- analyze ----
    auto* ana = app.add_subcommand("analyze", "Feature/label correlations and group t-tests");
    add_config_opt(ana);
    std::string ana_data, ana_lexicon, ana_outdir = ".";
    double ana_before = 7.0, ana_after = 7.0;
    ana->add_option("--data", ana_data, "dataset .jsonl")->required();
    ana->add_option("--lexicon", ana_lexicon, "lexicon .dic");
    ana->add_option("--window-before", ana_before, "window days before survey");
    ana->add_option("--window-after", ana_after, "window days after survey");
    ana->add_option("--out-dir", ana_outdir, "directory for analysis.json / analysis.txt");

    // ---- report ----
    auto* rep = app.add_subcommand("report", "Re-render report.txt from a saved report.json");
    add_config_opt(rep);
    std::string rep_in, rep_out;
    rep->add_option("--in", rep_in, "report.json path")->required();
    rep->add_option("--out", rep_out, "report.txt path")->required();

    std::vector<const char*> argv;
    argv.push_back("swb");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (gen->parsed()) {
            data::GeneratorConfig config;
            if (!gen_gconfig.empty()) config = data::load_generator_config(gen_gconfig);
            if (gen_n >= 0) config.n_users = static_cast<std::size_t>(gen_n);
            if (gen_marginals) config.paper_marginals = true;
            if (gen_noise >= 0) config.noise_sigma = gen_noise;
            auto lexicon = cli_detail::maybe_load_lexicon(gen_lexicon);
            data::Dataset ds =
                data::generate_corpus(config, gen_seed, lexicon ? &*lexicon : nullptr);
            data::write_dataset(ds, gen_out);
            out << "wrote " << ds.records.size() << " records to " << gen_out << "\n";
            return kOk;
        }

        if (ext->parsed()) {
            auto families = feat::parse_family_set(ext_families);
            if (families.count(feat::Family::L) && ext_lexicon.empty())
                throw UsageError("--families includes L but --lexicon was not given");
            data::Dataset ds = data::load_dataset(ext_data);
            auto lexicon = cli_detail::maybe_load_lexicon(ext_lexicon);
            auto window = feat::window_from_days(ext_before, ext_after);
            feat::FeatureMatrix fm =
                feat::build_matrix(ds, families, window, lexicon ? &*lexicon : nullptr);
            feat::write_feature_csv(fm, ext_out);
            out << "wrote " << fm.rows() << " x " << fm.cols() << " feature matrix to "
                << ext_out << "\n";
            if (!ext_norm_out.empty()) {
                std::vector<std::size_t> rows(fm.rows());
                for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
                feat::write_normalization(feat::fit_normalization(fm, rows), ext_norm_out);
                out << "wrote normalization params to " << ext_norm_out << "\n";
            }
            return kOk;
        }

        if (swp->parsed()) {
            auto combos = cli_detail::parse_combo_list(swp_families);
            bool needs_lexicon = false;
            for (const auto& c : combos) needs_lexicon = needs_lexicon || c.count(feat::Family::L);
            if (needs_lexicon && swp_lexicon.empty())
                throw UsageError("sweep includes family L but --lexicon was not given");
            auto algorithms = cli_detail::parse_algorithm_list(swp_algos);
            reg::Hyperparameters hp;
            if (file_config.contains("hyperparameters"))
                reg::apply_hyperparameter_overrides(hp, file_config.at("hyperparameters"));

            data::Dataset ds = data::load_dataset(swp_data);
            auto lexicon = cli_detail::maybe_load_lexicon(swp_lexicon);
            auto window = feat::window_from_days(swp_before, swp_after);
            eval::SweepReport report =
                eval::run_sweep(ds, combos, algorithms, hp, window,
                                lexicon ? &*lexicon : nullptr, swp_folds, swp_seed, swp_jobs);

            std::filesystem::create_directories(swp_outdir);
            std::string json_path = swp_outdir + "/report.json";
            std::string txt_path = swp_outdir + "/report.txt";
            {
                std::ofstream jf(json_path, std::ios::binary);
                if (!jf) throw Error("cannot write " + json_path);
                jf << eval::sweep_report_to_json(report).dump(2) << '\n';
            }
            {
                std::ofstream tf(txt_path, std::ios::binary);
                if (!tf) throw Error("cannot write " + txt_path);
                tf << eval::render_report_text(report);
            }
            out << "wrote " << report.cells.size() << " cells to " << json_path << "\n";
            for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
                const auto& b = report.best[d];
                if (b.gamma)
                    out << "best " << data::dimension_ids()[d] << ": " << *b.gamma << " ("
                        << b.families << ", " << b.algorithm << ")\n";
                else
                    out << "best " << data::dimension_ids()[d] << ": NA\n";
            }
            if (swp_strict) {
                for (const auto& c : report.cells)
                    if (!c.converged) {
                        err << "error: cell (" << c.dimension << ", " << c.families << ", "
                            << c.algorithm << ") did not converge\n";
                        return kNumeric;
                    }
            }
            return kOk;
        }

        if (ana->parsed()) {
            data::Dataset ds = data::load_dataset(ana_data);
            auto lexicon = cli_detail::maybe_load_lexicon(ana_lexicon);
            auto window = feat::window_from_days(ana_before, ana_after);
            std::set<feat::Family> fams = {feat::Family::D, feat::Family::B};
            if (lexicon) fams.insert(feat::Family::L);
            feat::FeatureMatrix fm =
                feat::build_matrix(ds, fams, window, lexicon ? &*lexicon : nullptr);
            std::vector<data::SwbLabels> labels;
            for (const auto& r : ds.records) labels.push_back(r.labels);

            eval::CorrelationTable table = eval::feature_correlations(fm, labels);
            auto age = eval::age_correlations(ds);

            nlohmann::json corr = nlohmann::json::object();
            for (std::size_t j = 0; j < table.feature_names.size(); ++j) {
                nlohmann::json row = nlohmann::json::object();
                for (std::size_t d = 0; d < data::kDimensionCount; ++d)
                    row[data::dimension_ids()[d]] =
                        table.values[j][d] ? nlohmann::json(*table.values[j][d])
                                           : nlohmann::json(nullptr);
                corr[table.feature_names[j]] = row;
            }
            nlohmann::json ttests = nlohmann::json::object();
            std::string txt = "Group t-tests (two-sided)\n";
            for (auto grouping : {eval::Grouping::gender, eval::Grouping::first_tier_vs_rest}) {
                nlohmann::json per_dim = nlohmann::json::object();
                for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
                    eval::TTestResult t =
                        eval::group_ttest(ds, grouping, data::dimension_ids()[d]);
                    per_dim[data::dimension_ids()[d]] = {{"t", t.t},
                                                         {"p", t.p},
                                                         {"mean_a", t.mean_a},
                                                         {"mean_b", t.mean_b},
                                                         {"n_a", t.n_a},
                                                         {"n_b", t.n_b}};
                    txt += "  " + eval::to_string(grouping) + " " + data::dimension_ids()[d] +
                           ": t=" + cli_detail::format_p(t.t) +
                           " p=" + cli_detail::format_p(t.p) + "\n";
                }
                ttests[eval::to_string(grouping)] = per_dim;
            }
            nlohmann::json age_j = nlohmann::json::object();
            txt += "Age correlations\n";
            for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
                age_j[data::dimension_ids()[d]] =
                    age[d] ? nlohmann::json(*age[d]) : nlohmann::json(nullptr);
                txt += "  " + data::dimension_ids()[d] + ": " +
                       (age[d] ? cli_detail::format_p(*age[d]) : std::string("NA")) + "\n";
            }

            nlohmann::json result{{"schema", "swb-analysis/1"},
                                  {"correlations", corr},
                                  {"ttests", ttests},
                                  {"age_correlations", age_j}};
            std::filesystem::create_directories(ana_outdir);
            {
                std::ofstream jf(ana_outdir + "/analysis.json", std::ios::binary);
                if (!jf) throw Error("cannot write " + ana_outdir + "/analysis.json");
                jf << result.dump(2) << '\n';
            }
            {
                std::ofstream tf(ana_outdir + "/analysis.txt", std::ios::binary);
                if (!tf) throw Error("cannot write " + ana_outdir + "/analysis.txt");
                tf << txt;
            }
            out << "wrote analysis to " << ana_outdir << "/analysis.json\n";
            return kOk;
        }

        if (rep->parsed()) {
            std::ifstream in(rep_in);
            if (!in) throw Error("cannot open report: " + rep_in);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ParseError("bad report JSON: " + std::string(e.what()));
            }
            eval::SweepReport report = eval::sweep_report_from_json(j);
            std::ofstream tf(rep_out, std::ios::binary);
            if (!tf) throw Error("cannot write " + rep_out);
            tf << eval::render_report_text(report);
            out << "rendered " << rep_out << "\n";
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}

}  // namespace swb::cli
