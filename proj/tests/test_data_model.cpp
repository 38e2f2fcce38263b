#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "swb/data/dataset_io.hpp"
#include "swb/data/generator.hpp"
#include "swb/eval/stats.hpp"
#include "swb/features/feature_matrix.hpp"
#include "swb/lexicon/lexicon.hpp"

using namespace swb;

namespace {

const char* kMetaLine =
    R"({"schema":"swb-dataset/1","n_records":2,"label_ranges":{"P.A.":[10,50],"N.A.":[10,50],"S.A.":[10,50],"P.L.":[10,50],"E.M.":[10,50],"P.R.":[10,50],"P.G.":[10,50],"A.I.":[10,50]},"counts":{"female":1,"male":1,"living_place":{"first_tier":1,"other_city":1,"rural":0}}})";

std::string record_line(const std::string& id, const std::string& gender,
                        const std::string& place) {
    return R"({"user_id":")" + id + R"(","profile":{"gender":")" + gender +
           R"(","age":24,"living_place":")" + place +
           R"(","nickname":"nn","description":"","followers_count":10,"followees_count":20,)"
           R"("bi_followers_count":5,"statuses_count":600,"favourites_count":3,)"
           R"("geo_enabled":true,"allow_all_comment":false,"allow_all_act_msg":true,)"
           R"("account_created_at":1000000000},"survey_time":1351728000,)"
           R"("posts":[{"timestamp":1351000000,"text":"happy day","is_repost":false,)"
           R"("mentions_count":0,"urls_count":0,"hashtags_count":0,"comments_received":1,)"
           R"("reposts_received":0}],"labels":{"P.A.":30,"N.A.":20,"S.A.":35,"P.L.":40,)"
           R"("E.M.":25,"P.R.":45,"P.G.":32,"A.I.":28}})";
}

data::GeneratorConfig small_config() {
    data::GeneratorConfig c;
    c.n_users = 40;
    c.posts_min = 5;
    c.posts_max = 20;
    return c;
}

}  // namespace

TEST_CASE("load: two-record well-formed file") {
    std::istringstream in(std::string(kMetaLine) + "\n" +
                          record_line("u1", "female", "first_tier") + "\n" +
                          record_line("u2", "male", "other_city") + "\n");
    data::Dataset ds = data::load_dataset_stream(in);
    CHECK(ds.records.size() == 2);
    CHECK(ds.meta.n_records == 2);
    CHECK(ds.records[0].profile.user_id == "u1");
    CHECK(ds.records[1].labels[0] == 30);
}

TEST_CASE("load: metadata count mismatch is an invariant violation") {
    std::istringstream in(std::string(kMetaLine) + "\n" +
                          record_line("u1", "female", "first_tier") + "\n");
    CHECK_THROWS_AS(data::load_dataset_stream(in), ValidationError);
}

TEST_CASE("load: duplicate user_id rejected") {
    std::string meta = kMetaLine;
    // fix counts: two females would not match either; use the same record twice
    std::istringstream in(meta + "\n" + record_line("u1", "female", "first_tier") + "\n" +
                          record_line("u1", "male", "other_city") + "\n");
    CHECK_THROWS_AS(data::load_dataset_stream(in), ValidationError);
}

TEST_CASE("load: malformed line reports its line number") {
    std::istringstream in(std::string(kMetaLine) + "\n{not json\n");
    try {
        data::load_dataset_stream(in);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("validation: record rule violations are named") {
    data::Dataset ds = data::generate_corpus(small_config(), 3);

    SUBCASE("age under 18") {
        ds.records[0].profile.age = 17;
        CHECK_THROWS_WITH_AS(data::validate_dataset(ds),
                             doctest::Contains("age must be >= 18"), ValidationError);
    }
    SUBCASE("bi-followers exceed followees") {
        ds.records[1].profile.bi_followers_count = ds.records[1].profile.followees_count + 1;
        CHECK_THROWS_AS(data::validate_dataset(ds), ValidationError);
    }
    SUBCASE("posts out of order") {
        REQUIRE(ds.records[2].posts.size() >= 2);
        std::swap(ds.records[2].posts.front(), ds.records[2].posts.back());
        CHECK_THROWS_AS(data::validate_dataset(ds), ValidationError);
    }
    SUBCASE("label outside declared range") {
        ds.records[0].labels[3] = ds.meta.label_ranges[3].max + 1;
        CHECK_THROWS_AS(data::validate_dataset(ds), ValidationError);
    }
    SUBCASE("empty text on a non-repost") {
        REQUIRE(!ds.records[0].posts.empty());
        ds.records[0].posts[0].text.clear();
        ds.records[0].posts[0].is_repost = false;
        CHECK_THROWS_AS(data::validate_dataset(ds), ValidationError);
    }
}

TEST_CASE("round trip: write then load is the identity") {
    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    data::GeneratorConfig c = small_config();
    c.n_users = 100;
    data::Dataset ds = data::generate_corpus(c, 11, &lx);

    std::string path = "roundtrip_test.jsonl";
    data::write_dataset(ds, path);
    data::Dataset back = data::load_dataset(path);
    CHECK(back == ds);

    // Byte stability: writing the reloaded dataset reproduces the same file.
    std::ostringstream first, second;
    data::write_dataset_stream(ds, first);
    data::write_dataset_stream(back, second);
    CHECK(first.str() == second.str());
    std::remove(path.c_str());
}

TEST_CASE("write: empty dataset produces a header-only file") {
    data::GeneratorConfig c = small_config();
    c.n_users = 0;
    data::Dataset ds = data::generate_corpus(c, 1);
    CHECK(ds.records.empty());
    std::ostringstream out;
    data::write_dataset_stream(ds, out);
    std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
}

TEST_CASE("write: unwritable path raises an I/O error") {
    data::Dataset ds = data::generate_corpus(small_config(), 2);
    CHECK_THROWS_AS(data::write_dataset(ds, "/nonexistent_dir_zz/x.jsonl"), Error);
}

TEST_CASE("generator: deterministic per seed, divergent across seeds") {
    data::Dataset a = data::generate_corpus(small_config(), 7);
    data::Dataset b = data::generate_corpus(small_config(), 7);
    data::Dataset c = data::generate_corpus(small_config(), 8);
    CHECK(a == b);
    CHECK_FALSE(a == c);

    std::ostringstream sa, sb;
    data::write_dataset_stream(a, sa);
    data::write_dataset_stream(b, sb);
    CHECK(sa.str() == sb.str());  // bit-identical serialization
}

TEST_CASE("generator: labels always inside declared ranges") {
    data::GeneratorConfig c = small_config();
    c.noise_sigma = 4.0;  // push mass toward the clamp edges
    data::Dataset ds = data::generate_corpus(c, 5);
    for (const auto& r : ds.records)
        for (std::size_t d = 0; d < data::kDimensionCount; ++d) {
            CHECK(r.labels[d] >= ds.meta.label_ranges[d].min);
            CHECK(r.labels[d] <= ds.meta.label_ranges[d].max);
        }
}

TEST_CASE("generator: paper marginals at n=1785, seed=7") {
    data::GeneratorConfig c;
    c.n_users = 1785;
    c.paper_marginals = true;
    c.posts_min = 0;
    c.posts_max = 0;  // profiles are enough here
    data::Dataset ds = data::generate_corpus(c, 7);
    double female_share = static_cast<double>(ds.meta.n_female) / 1785.0;
    double expected = 1136.0 / 1785.0;
    CHECK(std::fabs(female_share - expected) <= 0.03 * expected);
    // Living-place proportions should land near 1009/650/126.
    CHECK(ds.meta.living_place_counts[0] > ds.meta.living_place_counts[1]);
    CHECK(ds.meta.living_place_counts[1] > ds.meta.living_place_counts[2]);
}

TEST_CASE("generator: active filter keeps exactly statuses_count > 500") {
    data::GeneratorConfig c = small_config();
    c.n_users = 200;
    c.active_fraction = 0.5;
    data::Dataset ds = data::generate_corpus(c, 13);
    data::Dataset active = data::filter_active(ds, 500);
    std::size_t expected = 0;
    for (const auto& r : ds.records)
        if (r.profile.statuses_count > 500) ++expected;
    CHECK(active.records.size() == expected);
    CHECK(expected > 20);
    CHECK(expected < 180);
    for (const auto& r : active.records) CHECK(r.profile.statuses_count > 500);
    data::validate_dataset(active);
}

TEST_CASE("generator: infeasible configs are rejected") {
    data::GeneratorConfig c = small_config();
    SUBCASE("negative noise") {
        c.noise_sigma = -0.1;
        CHECK_THROWS_AS(data::generate_corpus(c, 1), NumericError);
    }
    SUBCASE("inverted posts range") {
        c.posts_min = 10;
        c.posts_max = 5;
        CHECK_THROWS_AS(data::generate_corpus(c, 1), NumericError);
    }
    SUBCASE("unknown weighted feature") {
        c.weights["P.A."]["no_such_feature"] = 1.0;
        CHECK_THROWS_AS(data::generate_corpus(c, 1), NumericError);
    }
    SUBCASE("linguistic weight without lexicon") {
        c.weights["P.A."]["L.posemo"] = 1.0;
        CHECK_THROWS_AS(data::generate_corpus(c, 1), NumericError);
    }
}

TEST_CASE("generator: noiseless planted labels are linearly recoverable (OLS oracle)") {
    auto lx = lex::parse_lexicon(testutil::data_path("demo_lexicon.dic"));
    data::GeneratorConfig c =
        data::load_generator_config(testutil::data_path("gen_noiseless.json"));
    c.n_users = 500;
    data::Dataset ds = data::generate_corpus(c, 21, &lx);

    feat::WindowSpec window;
    feat::FeatureMatrix fm = feat::build_matrix(
        ds, {feat::Family::D, feat::Family::B, feat::Family::L}, window, &lx);

    // P.A. was planted on these three features.
    std::vector<std::vector<double>> cols;
    cols.push_back(std::vector<double>(fm.rows(), 1.0));
    for (const char* name : {"statuses_count", "account_age_days", "gender"})
        cols.push_back(fm.values.column(fm.column_index(name)));

    std::vector<double> y;
    for (const auto& r : ds.records) y.push_back(static_cast<double>(r.labels[0]));

    auto beta = testutil::normal_equations_solve(cols, y);
    std::vector<double> pred(fm.rows(), 0.0);
    for (std::size_t i = 0; i < fm.rows(); ++i)
        for (std::size_t k = 0; k < cols.size(); ++k) pred[i] += beta[k] * cols[k][i];

    auto gamma = eval::pearson(pred, y);
    REQUIRE(gamma.has_value());
    CHECK(*gamma >= 0.999);
}

TEST_CASE("generator config: JSON parsing picks up every field") {
    auto c = data::load_generator_config(testutil::data_path("gen_paper_band.json"));
    CHECK(c.n_users == 1785);
    CHECK(c.paper_marginals);
    CHECK(c.noise_sigma == doctest::Approx(1.4));
    CHECK(c.label_ranges[0].min == 10);
    CHECK(c.label_ranges[0].max == 50);
    CHECK(c.weights.at("P.G.").at("L.i") == doctest::Approx(-0.55));
}
