#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "swb/cli/commands.hpp"

using namespace swb;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string tmp_dir() {
    static int counter = 0;
    std::string d = "cli_tmp_" + std::to_string(counter++);
    fs::create_directories(d);
    return d;
}

std::string demo_lexicon_path() { return testutil::data_path("demo_lexicon.dic"); }

}  // namespace

TEST_CASE("generate: writes the requested number of records, deterministically") {
    auto dir = tmp_dir();
    auto r1 = run_cli({"generate", "--n", "60", "--seed", "9", "--out", dir + "/a.jsonl"});
    CHECK(r1.code == 0);
    CHECK(r1.out.find("wrote 60 records") != std::string::npos);

    auto r2 = run_cli({"generate", "--n", "60", "--seed", "9", "--out", dir + "/b.jsonl"});
    CHECK(r2.code == 0);
    CHECK(slurp(dir + "/a.jsonl") == slurp(dir + "/b.jsonl"));

    auto r3 = run_cli({"generate", "--n", "60", "--seed", "10", "--out", dir + "/c.jsonl"});
    CHECK(slurp(dir + "/a.jsonl") != slurp(dir + "/c.jsonl"));
}

TEST_CASE("generate: paper marginals land near the documented proportions") {
    auto dir = tmp_dir();
    auto r = run_cli({"generate", "--n", "1785", "--paper-marginals", "--seed", "7", "--out",
                      dir + "/m.jsonl"});
    REQUIRE(r.code == 0);
    auto ds = data::load_dataset(dir + "/m.jsonl");
    double female_share = static_cast<double>(ds.meta.n_female) / 1785.0;
    double expected = 1136.0 / 1785.0;
    CHECK(std::fabs(female_share - expected) <= 0.03 * expected);
}

TEST_CASE("extract: family D gives user_id plus 3 columns") {
    auto dir = tmp_dir();
    REQUIRE(run_cli({"generate", "--n", "20", "--seed", "3", "--out", dir + "/d.jsonl"}).code ==
            0);
    auto r = run_cli({"extract", "--data", dir + "/d.jsonl", "--families", "D", "--out",
                      dir + "/f.csv"});
    CHECK(r.code == 0);
    std::string csv = slurp(dir + "/f.csv");
    std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header == "user_id,gender,age,living_place");
}

TEST_CASE("extract: 88-category lexicon yields 117 feature columns") {
    auto dir = tmp_dir();
    // Synthesize an 88-category dictionary.
    std::ofstream dic(dir + "/big.dic");
    dic << "%\n";
    for (int c = 1; c <= 88; ++c) dic << c << "\tcat" << c << "\n";
    dic << "%\n";
    for (int c = 1; c <= 88; ++c) dic << "word" << c << "\t" << c << "\n";
    dic.close();

    REQUIRE(run_cli({"generate", "--n", "15", "--seed", "4", "--out", dir + "/d.jsonl"}).code ==
            0);
    auto r = run_cli({"extract", "--data", dir + "/d.jsonl", "--lexicon", dir + "/big.dic",
                      "--families", "D,B,L", "--out", dir + "/f.csv", "--norm-out",
                      dir + "/norm.json"});
    CHECK(r.code == 0);
    std::string header = slurp(dir + "/f.csv");
    header = header.substr(0, header.find('\n'));
    CHECK(std::count(header.begin(), header.end(), ',') == 117);  // user_id + 117 features
    CHECK(fs::exists(dir + "/norm.json"));
}

TEST_CASE("extract: family L without a lexicon names the flag and exits 1") {
    auto dir = tmp_dir();
    REQUIRE(run_cli({"generate", "--n", "10", "--seed", "5", "--out", dir + "/d.jsonl"}).code ==
            0);
    auto r = run_cli({"extract", "--data", dir + "/d.jsonl", "--families", "D,L", "--out",
                      dir + "/f.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.find("--lexicon") != std::string::npos);
}

TEST_CASE("extract: missing dataset file exits 2") {
    auto r = run_cli({"extract", "--data", "no_such_file.jsonl", "--families", "D", "--out",
                      "x.csv"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
}

TEST_CASE("sweep: single-cell grid writes report files; reruns are byte-identical") {
    auto dir = tmp_dir();
    REQUIRE(run_cli({"generate", "--gen-config", testutil::data_path("gen_paper_band.json"),
                     "--n", "80", "--seed", "6", "--lexicon", demo_lexicon_path(), "--out",
                     dir + "/d.jsonl"})
                .code == 0);
    auto r = run_cli({"sweep", "--data", dir + "/d.jsonl", "--lexicon", demo_lexicon_path(),
                      "--families", "D+B+L", "--algorithms", "lasso", "--seed", "2",
                      "--out-dir", dir});
    CHECK(r.code == 0);
    CHECK(r.out.find("wrote 8 cells") != std::string::npos);
    CHECK(r.out.find("best P.A.") != std::string::npos);
    REQUIRE(fs::exists(dir + "/report.json"));
    REQUIRE(fs::exists(dir + "/report.txt"));
    std::string j1 = slurp(dir + "/report.json"), t1 = slurp(dir + "/report.txt");

    auto r2 = run_cli({"sweep", "--data", dir + "/d.jsonl", "--lexicon", demo_lexicon_path(),
                       "--families", "D+B+L", "--algorithms", "lasso", "--seed", "2",
                       "--out-dir", dir});
    CHECK(r2.code == 0);
    CHECK(slurp(dir + "/report.json") == j1);
    CHECK(slurp(dir + "/report.txt") == t1);
}

TEST_CASE("report: re-rendering a saved report.json reproduces report.txt exactly") {
    auto dir = tmp_dir();
    REQUIRE(run_cli({"generate", "--n", "60", "--seed", "8", "--out", dir + "/d.jsonl"}).code ==
            0);
    REQUIRE(run_cli({"sweep", "--data", dir + "/d.jsonl", "--families", "D,D+B",
                     "--algorithms", "stepwise", "--seed", "3", "--out-dir", dir})
                .code == 0);
    std::string original = slurp(dir + "/report.txt");
    auto r = run_cli({"report", "--in", dir + "/report.json", "--out", dir + "/rerendered.txt"});
    CHECK(r.code == 0);
    CHECK(slurp(dir + "/rerendered.txt") == original);
}

TEST_CASE("analyze: writes outputs; planted gender effect is significant") {
    auto dir = tmp_dir();
    REQUIRE(run_cli({"generate", "--gen-config", testutil::data_path("gen_paper_band.json"),
                     "--n", "400", "--seed", "12", "--lexicon", demo_lexicon_path(), "--out",
                     dir + "/d.jsonl"})
                .code == 0);
    auto r = run_cli({"analyze", "--data", dir + "/d.jsonl", "--lexicon", demo_lexicon_path(),
                      "--out-dir", dir});
    CHECK(r.code == 0);
    REQUIRE(fs::exists(dir + "/analysis.json"));
    REQUIRE(fs::exists(dir + "/analysis.txt"));

    auto j = nlohmann::json::parse(slurp(dir + "/analysis.json"));
    // gender carries planted weight +0.37 on P.A.
    double p = j.at("ttests").at("gender").at("P.A.").at("p").get<double>();
    CHECK(p < 0.005);
    double t = j.at("ttests").at("gender").at("P.A.").at("t").get<double>();
    CHECK(t > 0);  // group A (male) planted higher
    CHECK(j.at("correlations").contains("L.posemo"));
    CHECK(j.at("age_correlations").contains("E.M."));
}

TEST_CASE("report: structurally wrong JSON exits 2") {
    auto dir = tmp_dir();
    {
        std::ofstream bad(dir + "/bad.json");
        bad << R"({"schema": "swb-sweep-report/1", "seed": 1})";  // missing everything else
    }
    auto r = run_cli({"report", "--in", dir + "/bad.json", "--out", dir + "/out.txt"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli({"no_such_command"}).code == 1);
    CHECK(run_cli({"generate"}).code == 1);  // missing required --out
    CHECK(run_cli({}).code == 1);
}

TEST_CASE("SWB_SEED environment variable is the seed fallback") {
    auto dir = tmp_dir();
    setenv("SWB_SEED", "77", 1);
    auto r1 = run_cli({"generate", "--n", "30", "--out", dir + "/env.jsonl"});
    unsetenv("SWB_SEED");
    REQUIRE(r1.code == 0);
    auto r2 = run_cli({"generate", "--n", "30", "--seed", "77", "--out", dir + "/flag.jsonl"});
    REQUIRE(r2.code == 0);
    CHECK(slurp(dir + "/env.jsonl") == slurp(dir + "/flag.jsonl"));
}

TEST_CASE("--config overlays defaults and explicit flags win") {
    auto dir = tmp_dir();
    {
        std::ofstream cfg(dir + "/cli.json");
        cfg << R"({"n": 25, "seed": 5, "out": ")" << dir << R"(/from_config.jsonl"})";
    }
    auto r1 = run_cli({"generate", "--config", dir + "/cli.json"});
    CHECK(r1.code == 0);
    CHECK(r1.out.find("wrote 25 records") != std::string::npos);
    CHECK(fs::exists(dir + "/from_config.jsonl"));

    auto r2 = run_cli({"generate", "--config", dir + "/cli.json", "--n", "10", "--out",
                       dir + "/override.jsonl"});
    CHECK(r2.code == 0);
    CHECK(r2.out.find("wrote 10 records") != std::string::npos);
}

TEST_CASE("sweep --strict exits 3 on non-convergence") {
    auto dir = tmp_dir();
    REQUIRE(run_cli({"generate", "--gen-config", testutil::data_path("gen_paper_band.json"),
                     "--n", "60", "--seed", "13", "--lexicon", demo_lexicon_path(), "--out",
                     dir + "/d.jsonl"})
                .code == 0);
    {
        std::ofstream cfg(dir + "/hp.json");
        cfg << R"({"hyperparameters": {"svr_max_iter": 2}})";
    }
    auto r = run_cli({"sweep", "--config", dir + "/hp.json", "--data", dir + "/d.jsonl",
                      "--families", "D", "--algorithms", "svr", "--seed", "4", "--out-dir",
                      dir, "--strict"});
    CHECK(r.code == 3);
    CHECK(r.err.find("converge") != std::string::npos);
}
