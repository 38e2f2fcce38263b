#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "swb/numerics/rng.hpp"
#include "swb/regress/mars.hpp"

using namespace swb;

namespace {

reg::RegressionProblem hinge_problem(std::size_t n, std::uint64_t seed, double sigma) {
    num::SeededRng rng(seed);
    reg::RegressionProblem prob;
    prob.x = num::DenseMatrix(n, 1);
    prob.column_names = {"x0"};
    prob.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = rng.uniform();
        prob.x(i, 0) = x;
        prob.y[i] = std::max(0.0, x - 0.5) + sigma * rng.normal();
    }
    return prob;
}

double r_squared(const reg::TrainedModel& m, const reg::RegressionProblem& prob) {
    auto pred = reg::predict(m, prob);
    double ym = num::mean(prob.y), rss = 0, tss = 0;
    for (std::size_t i = 0; i < prob.y.size(); ++i) {
        rss += (prob.y[i] - pred[i]) * (prob.y[i] - pred[i]);
        tss += (prob.y[i] - ym) * (prob.y[i] - ym);
    }
    return 1.0 - rss / tss;
}

}  // namespace

TEST_CASE("mars: recovers a single hinge with an accurate knot") {
    int good = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto prob = hinge_problem(400, 100 + seed, 0.01);
        auto model = reg::fit_mars(prob, reg::Hyperparameters{});
        bool knot_ok = false;
        for (const auto& b : model.basis)
            if (std::fabs(b.knot - 0.5) <= 0.05) knot_ok = true;
        if (knot_ok && r_squared(model, prob) >= 0.95) ++good;
    }
    CHECK(good >= 9);
}

TEST_CASE("mars: constant outcome prunes to an intercept-only model") {
    num::SeededRng rng(5);
    reg::RegressionProblem prob;
    prob.x = num::DenseMatrix(100, 3);
    for (std::size_t i = 0; i < 100; ++i)
        for (std::size_t j = 0; j < 3; ++j) prob.x(i, j) = rng.normal();
    prob.column_names = {"a", "b", "c"};
    prob.y.assign(100, 4.25);
    auto model = reg::fit_mars(prob, reg::Hyperparameters{});
    CHECK(model.basis.empty());
    CHECK(model.intercept == doctest::Approx(4.25));
}

TEST_CASE("mars: forward-pass RSS never increases at an accepted step") {
    num::SeededRng rng(9);
    reg::RegressionProblem prob;
    const std::size_t n = 300;
    prob.x = num::DenseMatrix(n, 4);
    prob.y.resize(n);
    prob.column_names = {"a", "b", "c", "d"};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < 4; ++j) prob.x(i, j) = rng.uniform();
        prob.y[i] = std::max(0.0, prob.x(i, 0) - 0.3) - 2.0 * std::max(0.0, prob.x(i, 1) - 0.7) +
                    0.5 * prob.x(i, 2) + 0.05 * rng.normal();
    }
    auto model = reg::fit_mars(prob, reg::Hyperparameters{});
    auto trace = model.training_info.at("forward_rss_trace").get<std::vector<double>>();
    REQUIRE(trace.size() >= 2);
    for (std::size_t s = 1; s < trace.size(); ++s) CHECK(trace[s] <= trace[s - 1] + 1e-9);
}

TEST_CASE("mars: pruned GCV never exceeds the unpruned forward model's GCV") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto prob = hinge_problem(250, 200 + seed, 0.1);
        auto model = reg::fit_mars(prob, reg::Hyperparameters{});
        double gcv = model.training_info.at("gcv").get<double>();
        double forward_gcv = model.training_info.at("forward_gcv").get<double>();
        CHECK(gcv <= forward_gcv + 1e-12);
    }
}

TEST_CASE("mars: prediction is continuous at every knot") {
    auto prob = hinge_problem(300, 77, 0.05);
    auto model = reg::fit_mars(prob, reg::Hyperparameters{});
    REQUIRE(!model.basis.empty());
    for (const auto& b : model.basis) {
        num::DenseMatrix x(3, 1);
        x(0, 0) = b.knot - 1e-9;
        x(1, 0) = b.knot;
        x(2, 0) = b.knot + 1e-9;
        auto pred = reg::predict(model, x, {"x0"});
        CHECK(std::fabs(pred[1] - pred[0]) < 1e-6);
        CHECK(std::fabs(pred[2] - pred[1]) < 1e-6);
    }
}

TEST_CASE("mars: respects the max_basis budget") {
    auto prob = hinge_problem(300, 31, 0.3);
    reg::Hyperparameters hp;
    hp.mars_max_basis = 5;  // intercept + at most 2 pairs
    auto model = reg::fit_mars(prob, hp);
    CHECK(model.basis.size() <= 4);
}

TEST_CASE("mars: deterministic for identical inputs") {
    auto prob = hinge_problem(200, 13, 0.1);
    auto a = reg::fit_mars(prob, reg::Hyperparameters{});
    auto b = reg::fit_mars(prob, reg::Hyperparameters{});
    CHECK(reg::model_to_json(a).dump() == reg::model_to_json(b).dump());
}

TEST_CASE("mars model JSON: golden file predicts by hand and reserializes") {
    std::ifstream in(testutil::source_dir() + "/tests/golden/model_mars.json");
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string golden = buf.str();

    auto model = reg::model_from_json(nlohmann::json::parse(golden));
    REQUIRE(model.basis.size() == 2);
    num::DenseMatrix x(2, 1);
    x(0, 0) = 1.0;   // above the knot
    x(1, 0) = 0.1;   // below the knot
    auto pred = reg::predict(model, x, {"x1"});
    CHECK(pred[0] == doctest::Approx(0.25 + 1.25 * 0.5));   // increasing hinge
    CHECK(pred[1] == doctest::Approx(0.25 - 2.0 * 0.4));    // mirrored hinge
    CHECK(reg::model_to_json(model).dump() == golden);
}
