#pragma once

#include <cstdint>
#include <vector>

#include "swb/error.hpp"
#include "swb/numerics/rng.hpp"

namespace swb::eval {

struct FoldPlan {
    int k = 5;
    std::uint64_t seed = 0;
    std::vector<int> assignment;  // per row, 0..k-1

    std::vector<std::size_t> test_rows(int fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == fold) out.push_back(i);
        return out;
    }
    std::vector<std::size_t> train_rows(int fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] != fold) out.push_back(i);
        return out;
    }
};

// Seeded shuffle then round-robin: fold sizes differ by at most one.
inline FoldPlan make_folds(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("cross-validation needs k >= 2");
    if (n < static_cast<std::size_t>(k))
        throw ValidationError("cannot make " + std::to_string(k) + " folds from " +
                              std::to_string(n) + " rows");
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(n, 0);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    num::SeededRng rng(seed);
    rng.shuffle(perm);
    for (std::size_t i = 0; i < n; ++i)
        plan.assignment[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return plan;
}

}  // namespace swb::eval
