#pragma once
// Run reports aggregated from the cost ledger, and the exact telescoping
// self-check over recorded window skews: merging level-k windows pairwise
// into level k-1 must satisfy S^{k-1} = S^k + 2 R^k with integer equality,
// where S is the sum of squared window skews and R the sum of products over
// adjacent (odd, even) window pairs.

#include <cstdint>
#include <string>
#include <vector>

#include "ll/core_array.hpp"
#include "ll/seesaw.hpp"

namespace ll {

struct RunReport {
    std::string algo;
    std::size_t n = 0;
    std::size_t m = 0;
    std::string workload;
    std::uint64_t seed = 0;
    std::uint64_t ops = 0;
    std::uint64_t total_moves = 0;
    double moves_per_op = 0.0;
    std::uint64_t rebuild_moves = 0;
    std::uint64_t reset_moves = 0;
    std::uint64_t leaf_moves = 0;
    std::uint64_t expensive_leaf_moves = 0;
    double expensive_leaf_arrival_fraction = 0.0;
    std::size_t max_depth_observed = 0;
    double wall_ms = 0.0;
};

struct RunMeta {
    std::string algo;
    std::size_t n = 0;
    std::size_t m = 0;
    std::string workload;
    std::uint64_t seed = 0;
    std::uint64_t ops = 0;
    std::size_t max_depth = 0;
    double wall_ms = 0.0;
};

RunReport summarize(const CostLedger& ledger, const RunMeta& meta);

// One merge step: (d1,d2),(d3,d4),... summed; an odd trailing window merges
// with an empty half.
std::vector<long long> merge_window_skews(const std::vector<long long>& skews);

long long skew_square_sum(const std::vector<long long>& skews);      // S
long long skew_adjacent_products(const std::vector<long long>& skews);  // R

struct TelescopeLevel {
    long long s_coarse = 0;
    long long s_fine = 0;
    long long r_fine = 0;
    long long residual = 0;  // s_coarse - s_fine - 2*r_fine
};

struct TelescopeCheck {
    std::vector<TelescopeLevel> levels;  // finest first
    bool all_zero = true;
};

TelescopeCheck verify_telescoping(const std::vector<long long>& finest_skews);

// Residual scan over a whole recorded history; returns the number of
// subproblems whose windows satisfied the identity at every level, throwing
// on the first nonzero residual if `strict`.
std::size_t verify_history(const SkewHistory& history, std::size_t min_windows,
                           bool strict = true);

}  // namespace ll
