#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "swb/data/generator.hpp"
#include "swb/eval/analysis.hpp"
#include "swb/eval/cross_validation.hpp"
#include "swb/eval/folds.hpp"
#include "swb/eval/stats.hpp"
#include "swb/lexicon/lexicon.hpp"

using namespace swb;

TEST_CASE("pearson: perfect, inverted, and undefined cases") {
    std::vector<double> a = {1, 2, 3, 4};
    std::vector<double> b = {-1, -2, -3, -4};
    CHECK(*eval::pearson(a, a) == doctest::Approx(1.0));
    CHECK(*eval::pearson(a, b) == doctest::Approx(-1.0));
    std::vector<double> c = {5, 5, 5, 5};
    CHECK_FALSE(eval::pearson(a, c).has_value());
    CHECK_THROWS_AS(eval::pearson(a, std::vector<double>{1, 2}), ValidationError);
    CHECK_THROWS_AS(eval::pearson(std::vector<double>{1}, std::vector<double>{2}),
                    ValidationError);
}

TEST_CASE("pearson: fixed 10-element pair matches the covariance formula") {
    // Frozen vectors; the oracle below evaluates Cov/sqrt(Var*Var) in long
    // double over raw moments, a deliberately different route.
    std::vector<double> a = {0.12, -1.4, 2.3, 0.77, -0.31, 1.9, -2.2, 0.05, 1.11, -0.6};
    std::vector<double> b = {1.02, -0.9, 1.8, -0.4, 0.33, 2.1, -1.7, 0.18, 0.95, 0.2};
    long double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < 10; ++i) {
        sa += a[i];
        sb += b[i];
        sab += static_cast<long double>(a[i]) * b[i];
        saa += static_cast<long double>(a[i]) * a[i];
        sbb += static_cast<long double>(b[i]) * b[i];
    }
    long double n = 10.0L;
    long double cov = sab / n - (sa / n) * (sb / n);
    long double va = saa / n - (sa / n) * (sa / n);
    long double vb = sbb / n - (sb / n) * (sb / n);
    double expected = static_cast<double>(cov / std::sqrt(va * vb));
    CHECK(std::fabs(*eval::pearson(a, b) - expected) < 1e-12);
}

TEST_CASE("pearson properties: symmetry, affine invariance, sign flip") {
    num::SeededRng rng(2);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> a(30), b(30);
        for (int i = 0; i < 30; ++i) {
            a[i] = rng.normal();
            b[i] = rng.normal();
        }
        double r1 = *eval::pearson(a, b);
        CHECK(*eval::pearson(b, a) == doctest::Approx(r1).epsilon(1e-12));
        std::vector<double> scaled(30), flipped(30);
        for (int i = 0; i < 30; ++i) {
            scaled[i] = 2.5 * b[i] + 7.0;
            flipped[i] = -0.5 * b[i] + 1.0;
        }
        CHECK(*eval::pearson(a, scaled) == doctest::Approx(r1).epsilon(1e-10));
        CHECK(*eval::pearson(a, flipped) == doctest::Approx(-r1).epsilon(1e-10));
    }
}

TEST_CASE("folds: sizes, determinism, partition") {
    auto plan = eval::make_folds(10, 5, 3);
    for (int f = 0; f < 5; ++f) CHECK(plan.test_rows(f).size() == 2);

    auto big = eval::make_folds(1785, 5, 7);
    for (int f = 0; f < 5; ++f) CHECK(big.test_rows(f).size() == 357);

    auto again = eval::make_folds(1785, 5, 7);
    CHECK(big.assignment == again.assignment);
    auto other = eval::make_folds(1785, 5, 8);
    CHECK(big.assignment != other.assignment);

    // Partition: each row in exactly one fold.
    std::vector<int> seen(1785, 0);
    for (int f = 0; f < 5; ++f)
        for (std::size_t r : big.test_rows(f)) ++seen[r];
    for (int s : seen) CHECK(s == 1);

    CHECK_THROWS_AS(eval::make_folds(3, 5, 1), ValidationError);
    CHECK_THROWS_AS(eval::make_folds(10, 1, 1), ValidationError);
}

TEST_CASE("cross_validate: noiseless planted labels reach gamma >= 0.999") {
    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    auto cfg = data::load_generator_config(testutil::data_path("gen_noiseless.json"));
    auto ds = data::generate_corpus(cfg, 3, &lx);
    auto folds = eval::make_folds(ds.records.size(), 5, 11);
    auto res = eval::cross_validate(ds, "P.A.",
                                    {feat::Family::D, feat::Family::B, feat::Family::L},
                                    reg::Algorithm::stepwise, reg::Hyperparameters{},
                                    feat::WindowSpec{}, &lx, folds, 1);
    REQUIRE(res.gamma_pooled.has_value());
    CHECK(*res.gamma_pooled >= 0.999);
    CHECK(res.gamma_per_fold.size() == 5);
    for (const auto& g : res.gamma_per_fold) {
        REQUIRE(g.has_value());
        CHECK(*g >= 0.99);
    }
    // The pooled gamma must be recomputable from the retained predictions.
    auto recomputed = eval::pearson(res.pooled_predictions, res.true_labels);
    CHECK(*recomputed == doctest::Approx(*res.gamma_pooled).epsilon(1e-12));
}

TEST_CASE("cross_validate: constant labels propagate the degenerate marker") {
    auto cfg = data::GeneratorConfig{};
    cfg.n_users = 40;
    cfg.posts_min = 2;
    cfg.posts_max = 6;
    cfg.noise_sigma = 0.0;  // no weights and no noise: labels all at center
    auto ds = data::generate_corpus(cfg, 5);
    auto folds = eval::make_folds(ds.records.size(), 5, 1);
    auto res = eval::cross_validate(ds, "S.A.", {feat::Family::D, feat::Family::B},
                                    reg::Algorithm::stepwise, reg::Hyperparameters{},
                                    feat::WindowSpec{}, nullptr, folds, 2);
    CHECK_FALSE(res.gamma_pooled.has_value());
    for (const auto& g : res.gamma_per_fold) CHECK_FALSE(g.has_value());
}

TEST_CASE("cross_validate: permuted labels land in the random-guess band") {
    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    auto cfg = data::load_generator_config(testutil::data_path("gen_paper_band.json"));
    cfg.n_users = 300;
    cfg.paper_marginals = false;
    auto ds = data::generate_corpus(cfg, 9, &lx);

    auto matrix = feat::build_matrix(ds, {feat::Family::D, feat::Family::B, feat::Family::L},
                                     feat::WindowSpec{}, &lx);
    std::vector<double> y;
    for (const auto& r : ds.records) y.push_back(static_cast<double>(r.labels[0]));
    auto folds = eval::make_folds(ds.records.size(), 5, 4);
    auto res = eval::cross_validate(matrix, y, "P.A.", "D+B+L", reg::Algorithm::stepwise,
                                    reg::Hyperparameters{}, folds, 3);
    REQUIRE(res.gamma_pooled.has_value());

    // Band check at this n: |gamma| < 2.5/sqrt(n) for most permutations.
    num::SeededRng rng(17);
    int in_band = 0;
    const int perms = 60;
    for (int t = 0; t < perms; ++t) {
        std::vector<double> perm = y;
        rng.shuffle(perm);
        auto g = eval::pearson(res.pooled_predictions, perm);
        if (g && std::fabs(*g) < 2.5 / std::sqrt(300.0)) ++in_band;
    }
    CHECK(in_band >= 54);
}

TEST_CASE("cross_validate: test-row perturbation never touches the fold model") {
    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    auto cfg = data::load_generator_config(testutil::data_path("gen_paper_band.json"));
    cfg.n_users = 120;
    cfg.paper_marginals = false;
    auto ds = data::generate_corpus(cfg, 23, &lx);
    auto matrix = feat::build_matrix(ds, {feat::Family::D, feat::Family::B, feat::Family::L},
                                     feat::WindowSpec{}, &lx);
    std::vector<double> y;
    for (const auto& r : ds.records) y.push_back(static_cast<double>(r.labels[2]));
    auto folds = eval::make_folds(ds.records.size(), 5, 6);

    for (auto algo : {reg::Algorithm::stepwise, reg::Algorithm::lasso}) {
        auto base = eval::cross_validate(matrix, y, "S.A.", "D+B+L", algo,
                                         reg::Hyperparameters{}, folds, 10);
        num::SeededRng rng(31);
        for (int trial = 0; trial < 3; ++trial) {
            int fold = static_cast<int>(rng.bounded(5));
            auto test_rows = folds.test_rows(fold);
            std::size_t victim = test_rows[rng.bounded(test_rows.size())];

            feat::FeatureMatrix mutated = matrix;
            std::vector<double> y2 = y;
            for (std::size_t j = 0; j < mutated.cols(); ++j)
                mutated.values(victim, j) += 7.5;
            y2[victim] += 11.0;

            auto res = eval::cross_validate(mutated, y2, "S.A.", "D+B+L", algo,
                                            reg::Hyperparameters{}, folds, 10);
            CHECK(res.fold_models[fold] == base.fold_models[fold]);
        }
    }
}

TEST_CASE("feature_correlations: identity, nulls, planted sign") {
    // Identity: a feature equal to a label column correlates at 1.
    const std::size_t n = 200;
    num::SeededRng rng(41);
    std::vector<data::SwbLabels> labels(n);
    for (auto& l : labels)
        for (std::size_t d = 0; d < data::kDimensionCount; ++d)
            l[d] = static_cast<int>(rng.uniform_int(10, 50));

    feat::FeatureMatrix fm;
    fm.column_names = {"copy_of_pa", "pure_noise", "constant"};
    fm.values = num::DenseMatrix(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        fm.values(i, 0) = labels[i][0];
        fm.values(i, 1) = rng.normal();
        fm.values(i, 2) = 3.0;
        fm.user_ids.push_back("u" + std::to_string(i));
    }
    auto table = eval::feature_correlations(fm, labels);
    CHECK(*table.values[0][0] == doctest::Approx(1.0));
    CHECK_FALSE(table.values[2][0].has_value());  // constant feature undefined

    // Null columns: |r| below 2/sqrt(n) most of the time.
    int in_band = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        feat::FeatureMatrix nf;
        nf.column_names = {"noise"};
        nf.values = num::DenseMatrix(n, 1);
        for (std::size_t i = 0; i < n; ++i) nf.values(i, 0) = rng.normal();
        auto tb = eval::feature_correlations(nf, labels);
        bool ok = true;
        for (std::size_t d = 0; d < data::kDimensionCount; ++d)
            if (std::fabs(*tb.values[0][d]) >= 2.5 / std::sqrt(static_cast<double>(n)))
                ok = false;
        if (ok) ++in_band;
    }
    CHECK(in_band >= 28);

    // Planted positive weight shows up with a positive sign.
    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    auto cfg = data::load_generator_config(testutil::data_path("gen_paper_band.json"));
    cfg.n_users = 300;
    cfg.paper_marginals = false;
    auto ds = data::generate_corpus(cfg, 51, &lx);
    auto fm2 = feat::build_matrix(ds, {feat::Family::B, feat::Family::L}, feat::WindowSpec{},
                                  &lx);
    std::vector<data::SwbLabels> labels2;
    for (const auto& r : ds.records) labels2.push_back(r.labels);
    auto table2 = eval::feature_correlations(fm2, labels2);
    std::size_t posemo = fm2.column_index("L.posemo");
    CHECK(*table2.values[posemo][0] > 0.15);  // L.posemo planted on P.A.
}

TEST_CASE("group t-test: duplicated groups give t=0, p=1") {
    data::GeneratorConfig cfg;
    cfg.n_users = 30;
    cfg.posts_min = 1;
    cfg.posts_max = 4;
    auto ds = data::generate_corpus(cfg, 61);
    // Mirror every record across gender with identical labels.
    data::Dataset clone = ds;
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        data::UserRecord r = ds.records[i];
        r.profile.user_id += "_twin";
        r.profile.gender = r.profile.gender == data::Gender::male ? data::Gender::female
                                                                  : data::Gender::male;
        clone.records.push_back(r);
    }
    clone.meta.n_records = clone.records.size();
    clone.meta.n_female = clone.meta.n_male = ds.records.size();
    clone.meta.living_place_counts = {0, 0, 0};
    for (const auto& r : clone.records)
        ++clone.meta.living_place_counts[static_cast<std::size_t>(r.profile.living_place)];

    auto t = eval::group_ttest(clone, eval::Grouping::gender, "P.A.");
    CHECK(t.t == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("t-test: planted one-sigma shift at n=200/side is detected") {
    num::SeededRng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a(200), b(200);
        for (auto& v : a) v = rng.normal(1.0, 1.0);
        for (auto& v : b) v = rng.normal(0.0, 1.0);
        auto r = eval::two_sample_ttest(a, b);
        CHECK(r.p < 0.005);
        CHECK(r.t > 0);
    }
}

TEST_CASE("t-test: null calibration near the nominal rate") {
    num::SeededRng rng(81);
    int rejections = 0;
    const int sims = 400;
    for (int s = 0; s < sims; ++s) {
        std::vector<double> a(50), b(50);
        for (auto& v : a) v = rng.normal();
        for (auto& v : b) v = rng.normal();
        if (eval::two_sample_ttest(a, b).p < 0.05) ++rejections;
    }
    double rate = static_cast<double>(rejections) / sims;
    CHECK(rate > 0.02);
    CHECK(rate < 0.09);
}

TEST_CASE("age correlations: undefined for constant age, planted sign recovered") {
    data::GeneratorConfig cfg;
    cfg.n_users = 50;
    cfg.posts_min = 1;
    cfg.posts_max = 4;
    auto ds = data::generate_corpus(cfg, 91);
    for (auto& r : ds.records) r.profile.age = 30;
    auto corr = eval::age_correlations(ds);
    for (const auto& c : corr) CHECK_FALSE(c.has_value());

    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    auto band = data::load_generator_config(testutil::data_path("gen_paper_band.json"));
    band.n_users = 400;
    band.paper_marginals = false;
    auto ds2 = data::generate_corpus(band, 92, &lx);
    auto corr2 = eval::age_correlations(ds2);
    // age is planted +0.32 on E.M. (index 4) and -0.20 on N.A. (index 1)
    CHECK(*corr2[4] > 0.05);
    CHECK(*corr2[1] < -0.02);
}

TEST_CASE("group t-test: planted city-tier effect is significant") {
    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    auto cfg = data::load_generator_config(testutil::data_path("gen_paper_band.json"));
    cfg.n_users = 500;
    auto ds = data::generate_corpus(cfg, 95, &lx);
    // living_place carries weight +0.37 on S.A., and none on N.A.
    auto t = eval::group_ttest(ds, eval::Grouping::first_tier_vs_rest, "S.A.");
    CHECK(t.p < 0.005);
    CHECK(t.t > 0);
}

TEST_CASE("group t-test: pure-noise labels rarely cross p < 0.005") {
    data::GeneratorConfig cfg;
    cfg.n_users = 200;
    cfg.posts_min = 1;
    cfg.posts_max = 5;
    cfg.noise_sigma = 1.0;  // no weights: labels carry no group signal
    int clean_seeds = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        auto ds = data::generate_corpus(cfg, 700 + s);
        bool any_hit = false;
        for (auto grouping : {eval::Grouping::gender, eval::Grouping::first_tier_vs_rest})
            for (std::size_t d = 0; d < data::kDimensionCount; ++d)
                if (eval::group_ttest(ds, grouping, data::dimension_ids()[d]).p < 0.005)
                    any_hit = true;
        if (!any_hit) ++clean_seeds;
    }
    // 16 null tests at 0.005 cross somewhere in ~8% of corpora.
    CHECK(clean_seeds >= 17);
}

TEST_CASE("group t-test: too-small group is an error") {
    data::GeneratorConfig cfg;
    cfg.n_users = 10;
    cfg.posts_min = 1;
    cfg.posts_max = 3;
    auto ds = data::generate_corpus(cfg, 93);
    for (auto& r : ds.records) r.profile.gender = data::Gender::female;
    ds.meta.n_female = ds.records.size();
    ds.meta.n_male = 0;
    CHECK_THROWS_AS(eval::group_ttest(ds, eval::Grouping::gender, "P.A."), ValidationError);
}
