#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "swb/data/records.hpp"
#include "swb/error.hpp"
#include "swb/features/detectors.hpp"
#include "swb/features/feature_matrix.hpp"
#include "swb/features/registry.hpp"
#include "swb/lexicon/lexicon.hpp"
#include "swb/numerics/rng.hpp"

namespace swb::data {

// Synthetic corpus with a planted linear label model. Profiles and posts are
// drawn per user; labels are a weighted sum of that user's actually-extracted
// features (standardized over the corpus), plus Gaussian noise, rounded and
// clamped into the declared ranges. A pipeline that recovers the weights
// recovers the labels up to the noise floor, which makes the whole system
// testable end to end without any private data.
struct GeneratorConfig {
    std::size_t n_users = 100;
    bool paper_marginals = false;    // female 1136/1785, living place 1009/650/126
    int posts_min = 30, posts_max = 90;
    int tokens_min = 6, tokens_max = 24;
    std::int64_t survey_time_base = 1351728000;  // 2012-11-01 UTC
    int survey_jitter_days = 6;
    double window_before_days = 7.0, window_after_days = 7.0;
    std::array<LabelRange, kDimensionCount> label_ranges = [] {
        std::array<LabelRange, kDimensionCount> r{};
        r.fill({10, 50});
        return r;
    }();
    double label_center = 30.0;
    double label_scale = 5.0;
    double noise_sigma = 1.5;        // in standardized-signal units
    double active_fraction = 1.0;    // share of users with statuses_count > 500
    // dimension id -> (feature name -> weight); empty map = pure-noise labels
    std::map<std::string, std::map<std::string, double>> weights;
};

inline GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
    GeneratorConfig c;
    if (j.contains("n_users")) c.n_users = j.at("n_users").get<std::size_t>();
    if (j.contains("paper_marginals")) c.paper_marginals = j.at("paper_marginals").get<bool>();
    if (j.contains("posts_per_user")) {
        c.posts_min = j.at("posts_per_user").at("min").get<int>();
        c.posts_max = j.at("posts_per_user").at("max").get<int>();
    }
    if (j.contains("tokens_per_post")) {
        c.tokens_min = j.at("tokens_per_post").at("min").get<int>();
        c.tokens_max = j.at("tokens_per_post").at("max").get<int>();
    }
    if (j.contains("survey_time")) c.survey_time_base = j.at("survey_time").get<std::int64_t>();
    if (j.contains("survey_jitter_days"))
        c.survey_jitter_days = j.at("survey_jitter_days").get<int>();
    if (j.contains("window")) {
        c.window_before_days = j.at("window").at("before_days").get<double>();
        c.window_after_days = j.at("window").at("after_days").get<double>();
    }
    if (j.contains("label_range")) {
        LabelRange r{j.at("label_range").at(0).get<int>(), j.at("label_range").at(1).get<int>()};
        c.label_ranges.fill(r);
    }
    if (j.contains("label_ranges")) {
        for (std::size_t d = 0; d < kDimensionCount; ++d) {
            const auto& key = dimension_ids()[d];
            if (j.at("label_ranges").contains(key)) {
                c.label_ranges[d].min = j.at("label_ranges").at(key).at(0).get<int>();
                c.label_ranges[d].max = j.at("label_ranges").at(key).at(1).get<int>();
            }
        }
    }
    if (j.contains("label_center")) c.label_center = j.at("label_center").get<double>();
    if (j.contains("label_scale")) c.label_scale = j.at("label_scale").get<double>();
    if (j.contains("noise_sigma")) c.noise_sigma = j.at("noise_sigma").get<double>();
    if (j.contains("active_fraction")) c.active_fraction = j.at("active_fraction").get<double>();
    if (j.contains("weights")) {
        for (auto it = j.at("weights").begin(); it != j.at("weights").end(); ++it) {
            std::map<std::string, double> wm;
            for (auto w = it.value().begin(); w != it.value().end(); ++w)
                wm[w.key()] = w.value().get<double>();
            c.weights[it.key()] = std::move(wm);
        }
    }
    return c;
}

inline GeneratorConfig load_generator_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open generator config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad generator config: " + std::string(e.what()));
    }
    return generator_config_from_json(j);
}

namespace gen_detail {

inline const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {
        "zama", "zemi", "zulo", "zonk", "zib",  "vato", "veku", "viro", "vusk", "quat",
        "qimo", "qune", "qorv", "zeta", "vind", "zopa", "qial", "vemo", "zuri", "qesk",
        "voli", "zank", "quip", "verd", "zilt", "qova", "vrim", "zesk", "qund", "vask",
    };
    return words;
}

inline const std::vector<std::string>& emoticon_tokens() {
    static const std::vector<std::string> toks = {"[smile]", "[cry]", "[heart]", "[haha]",
                                                  "[angry]", "[moon]"};
    return toks;
}

struct CategoryMixture {
    // cumulative propensity over categories; empty when no lexicon
    std::vector<double> cumulative;
    double total = 0.0;

    int draw(num::SeededRng& rng) const {
        double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
        if (idx >= cumulative.size()) idx = cumulative.size() - 1;
        return static_cast<int>(idx) + 1;  // category ids are 1-based
    }
};

inline std::string random_letters(num::SeededRng& rng, int len) {
    std::string s;
    for (int i = 0; i < len; ++i)
        s.push_back(static_cast<char>('a' + rng.bounded(26)));
    return s;
}

inline std::string compose_post_text(num::SeededRng& rng, const lex::Lexicon* lexicon,
                                     const CategoryMixture& mixture,
                                     const std::vector<std::vector<std::string>>& cat_words,
                                     int n_tokens) {
    std::string text;
    for (int t = 0; t < n_tokens; ++t) {
        if (!text.empty()) text += ' ';
        double u = rng.uniform();
        if (lexicon && u < 0.62) {
            int cat = mixture.draw(rng);
            const auto& words = cat_words[static_cast<std::size_t>(cat - 1)];
            if (!words.empty()) {
                text += words[rng.bounded(words.size())];
                continue;
            }
            u = 1.0;  // category has no exact words; fall through to filler
        }
        if (u < 0.90) {
            const auto& fillers = filler_words();
            text += fillers[rng.bounded(fillers.size())];
        } else {
            switch (rng.bounded(4)) {
                case 0: text += emoticon_tokens()[rng.bounded(emoticon_tokens().size())]; break;
                case 1: text += "@friend" + std::to_string(rng.bounded(900) + 100); break;
                case 2: text += "#topic" + std::to_string(rng.bounded(9)) + "#"; break;
                default: text += "http://t.example/" + random_letters(rng, 6); break;
            }
        }
    }
    return text;
}

}  // namespace gen_detail

inline void validate_generator_config(const GeneratorConfig& c, const lex::Lexicon* lexicon) {
    auto infeasible = [](const std::string& why) {
        throw NumericError("infeasible generator config: " + why);
    };
    if (c.noise_sigma < 0) infeasible("noise_sigma must be >= 0");
    if (c.label_scale <= 0) infeasible("label_scale must be > 0");
    if (c.posts_min < 0 || c.posts_min > c.posts_max) infeasible("bad posts_per_user range");
    if (c.tokens_min < 1 || c.tokens_min > c.tokens_max) infeasible("bad tokens_per_post range");
    if (c.window_before_days < 0 || c.window_after_days < 0) infeasible("negative window");
    if (c.active_fraction < 0 || c.active_fraction > 1) infeasible("active_fraction not in [0,1]");
    for (std::size_t d = 0; d < kDimensionCount; ++d)
        if (c.label_ranges[d].min > c.label_ranges[d].max)
            infeasible("label range inverted for " + dimension_ids()[d]);

    feat::FeatureRegistry registry = feat::FeatureRegistry::build(lexicon);
    std::set<std::string> known;
    for (const auto& e : registry.entries()) known.insert(e.name);
    for (const auto& [dim, wm] : c.weights) {
        dimension_index(dim);  // throws on unknown dimension
        for (const auto& [name, w] : wm) {
            (void)w;
            if (!known.count(name)) {
                if (name.rfind("L.", 0) == 0 && lexicon == nullptr)
                    infeasible("weight on linguistic feature '" + name +
                               "' but no lexicon supplied");
                infeasible("weight references unknown feature '" + name + "'");
            }
        }
    }
    if (lexicon) {
        for (const auto& f : gen_detail::filler_words())
            if (lexicon->lookup(f) != nullptr)
                infeasible("lexicon collides with generator filler word '" + f + "'");
    }
}

// Deterministic for a given (config, seed): each user draws from a child
// stream keyed by (seed, user index), label noise from its own stream.
inline Dataset generate_corpus(const GeneratorConfig& config, std::uint64_t seed,
                               const lex::Lexicon* lexicon = nullptr) {
    validate_generator_config(config, lexicon);

    Dataset ds;
    ds.meta.label_ranges = config.label_ranges;

    const double p_female = config.paper_marginals ? 1136.0 / 1785.0 : 0.5;
    const std::array<double, 3> p_place = config.paper_marginals
        ? std::array<double, 3>{1009.0 / 1785.0, 650.0 / 1785.0, 126.0 / 1785.0}
        : std::array<double, 3>{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

    // Exact words per category for text composition (wildcards are match
    // patterns, not emittable words).
    std::vector<std::vector<std::string>> cat_words;
    if (lexicon)
        for (const auto& c : lexicon->categories())
            cat_words.push_back(lexicon->exact_words_in_category(c.id));

    const std::int64_t before_s =
        static_cast<std::int64_t>(config.window_before_days * 86400.0);
    const std::int64_t after_s =
        static_cast<std::int64_t>(config.window_after_days * 86400.0);

    for (std::size_t i = 0; i < config.n_users; ++i) {
        num::SeededRng rng(num::mix_seed({seed, 1, i}));
        UserRecord rec;
        Profile& p = rec.profile;

        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "u%06zu", i);
        p.user_id = idbuf;
        p.gender = rng.bernoulli(p_female) ? Gender::female : Gender::male;
        p.age = static_cast<int>(rng.uniform_int(18, 55));
        double up = rng.uniform();
        p.living_place = up < p_place[0] ? LivingPlace::first_tier
                        : up < p_place[0] + p_place[1] ? LivingPlace::other_city
                                                       : LivingPlace::rural;
        p.nickname = gen_detail::random_letters(rng, static_cast<int>(rng.uniform_int(3, 12)));
        int desc_words = static_cast<int>(rng.uniform_int(0, 9));
        for (int w = 0; w < desc_words; ++w) {
            if (!p.description.empty()) p.description += ' ';
            p.description +=
                gen_detail::filler_words()[rng.bounded(gen_detail::filler_words().size())];
        }
        p.followees_count = rng.uniform_int(50, 1500);
        p.bi_followers_count = rng.uniform_int(0, p.followees_count / 3);
        p.followers_count = static_cast<std::int64_t>(std::floor(std::exp(rng.normal(5.0, 1.3))));
        bool active = rng.bernoulli(config.active_fraction);
        p.statuses_count = active ? 501 + rng.uniform_int(0, 4000) : rng.uniform_int(0, 500);
        p.favourites_count = rng.uniform_int(0, 800);
        p.geo_enabled = rng.bernoulli(0.5);
        p.allow_all_comment = rng.bernoulli(0.7);
        p.allow_all_act_msg = rng.bernoulli(0.6);

        rec.survey_time = config.survey_time_base +
                          rng.uniform_int(0, config.survey_jitter_days) * 86400 +
                          rng.uniform_int(0, 86399);
        std::int64_t account_age_days = rng.uniform_int(200, 2400);
        p.account_created_at = rec.survey_time - account_age_days * 86400;

        gen_detail::CategoryMixture mixture;
        if (lexicon) {
            double total = 0.0;
            for (std::size_t c = 0; c < lexicon->category_count(); ++c) {
                total += std::exp(1.1 * rng.normal());
                mixture.cumulative.push_back(total);
            }
            mixture.total = total;
        }

        int n_posts = static_cast<int>(rng.uniform_int(config.posts_min, config.posts_max));
        for (int k = 0; k < n_posts; ++k) {
            Post post;
            // First post always predates the survey so the survey time sits
            // inside or after the posts' span.
            bool in_window = k > 0 && rng.bernoulli(0.55);
            if (in_window) {
                post.timestamp = rec.survey_time - before_s + rng.uniform_int(0, before_s + after_s);
            } else {
                std::int64_t lo = p.account_created_at + 1;
                std::int64_t hi = rec.survey_time - before_s - 1;
                if (hi < lo) hi = lo;
                post.timestamp = lo + rng.uniform_int(0, hi - lo);
            }
            int n_tokens = static_cast<int>(rng.uniform_int(config.tokens_min, config.tokens_max));
            post.text = gen_detail::compose_post_text(rng, lexicon, mixture, cat_words, n_tokens);
            post.is_repost = rng.bernoulli(0.15);
            if (post.is_repost && rng.bernoulli(0.3)) post.text.clear();
            post.mentions_count = feat::count_mentions(post.text);
            post.urls_count = feat::count_urls(post.text);
            post.hashtags_count = feat::count_hashtags(post.text);
            post.comments_received = rng.uniform_int(0, 30);
            post.reposts_received = rng.uniform_int(0, 10);
            rec.posts.push_back(std::move(post));
        }
        std::sort(rec.posts.begin(), rec.posts.end(),
                  [](const Post& a, const Post& b) { return a.timestamp < b.timestamp; });

        if (p.gender == Gender::female) ++ds.meta.n_female; else ++ds.meta.n_male;
        ++ds.meta.living_place_counts[static_cast<std::size_t>(p.living_place)];
        ds.records.push_back(std::move(rec));
    }
    ds.meta.n_records = ds.records.size();

    // Planted labels: weighted sum of the user's extracted features,
    // standardized per column over this corpus, unit-variance signal, plus
    // noise, then round and clamp.
    if (!ds.records.empty()) {
        std::set<feat::Family> fams = {feat::Family::D, feat::Family::B};
        if (lexicon) fams.insert(feat::Family::L);
        feat::WindowSpec window =
            feat::window_from_days(config.window_before_days, config.window_after_days);
        feat::FeatureMatrix fm = feat::build_matrix(ds, fams, window, lexicon);

        num::SeededRng noise_rng(num::mix_seed({seed, 2}));
        const std::size_t n = ds.records.size();

        std::array<std::vector<double>, kDimensionCount> signal;
        for (std::size_t d = 0; d < kDimensionCount; ++d) signal[d].assign(n, 0.0);

        for (const auto& [dim, wm] : config.weights) {
            std::size_t d = dimension_index(dim);
            for (const auto& [name, w] : wm) {
                std::size_t j = fm.column_index(name);
                std::vector<double> col = fm.values.column(j);
                double m = num::mean(col);
                double sd = std::sqrt(num::variance(col));
                if (sd == 0.0) continue;  // constant feature carries no signal
                for (std::size_t i = 0; i < n; ++i)
                    signal[d][i] += w * (col[i] - m) / sd;
            }
        }
        for (std::size_t d = 0; d < kDimensionCount; ++d) {
            double sd = std::sqrt(num::variance(signal[d]));
            if (sd > 0)
                for (double& v : signal[d]) v /= sd;
        }

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < kDimensionCount; ++d) {
                double eps = noise_rng.normal(0.0, config.noise_sigma);
                double raw = config.label_center + config.label_scale * (signal[d][i] + eps);
                int score = static_cast<int>(std::lround(raw));
                score = std::clamp(score, config.label_ranges[d].min, config.label_ranges[d].max);
                ds.records[i].labels[d] = score;
            }
        }
    }

    validate_dataset(ds);
    return ds;
}

}  // namespace swb::data
