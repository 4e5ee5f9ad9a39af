#pragma once

#include <cstdint>

#include "backnet/core_model.hpp"

namespace backnet {

struct OracleResult {
    Plan plan;
    double cost = 0.0;
    std::uint64_t explored = 0;  // complete assignments evaluated
    bool feasible_found = false;
};

inline constexpr std::size_t kOriginalOracleCap = 5;
inline constexpr std::size_t kOfOracleCap = 6;

// Exhaustive search over {none, OF, hybrid} for every station pair, pairs in
// (i, j) lexicographic order and states in that order; the first cheapest
// assignment wins. Throws CapExceeded above the cap, Infeasible when nothing
// satisfies the constraints.
OracleResult brute_force_original(const ProblemInstance& problem,
                                  std::size_t cap = kOriginalOracleCap);

// Exhaustive search over OF-only link subsets with min path diversity >= K.
OracleResult brute_force_of(const ProblemInstance& problem, std::size_t cap = kOfOracleCap);

// True when every OF-only subset with min path diversity >= K also meets the
// per-station reliability and rate constraints.
bool redundancy_check(const ProblemInstance& problem, std::size_t cap = kOfOracleCap);

}  // namespace backnet
