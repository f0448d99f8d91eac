#include "ll/metrics.hpp"

namespace ll {

RunReport summarize(const CostLedger& ledger, const RunMeta& meta) {
    RunReport r;
    r.algo = meta.algo;
    r.n = meta.n;
    r.m = meta.m;
    r.workload = meta.workload;
    r.seed = meta.seed;
    r.ops = meta.ops;
    r.rebuild_moves = ledger.moves(CostCategory::Rebuild);
    r.reset_moves = ledger.moves(CostCategory::Reset);
    r.leaf_moves = ledger.moves(CostCategory::LeafLocal);
    r.expensive_leaf_moves = ledger.moves(CostCategory::ExpensiveLeafLocal);
    r.total_moves = ledger.total_moves();
    r.moves_per_op = meta.ops ? static_cast<double>(r.total_moves) / meta.ops : 0.0;
    r.expensive_leaf_arrival_fraction =
        meta.ops ? static_cast<double>(ledger.expensive_leaf_arrivals) / meta.ops : 0.0;
    r.max_depth_observed = meta.max_depth;
    r.wall_ms = meta.wall_ms;
    return r;
}

std::vector<long long> merge_window_skews(const std::vector<long long>& skews) {
    std::vector<long long> out;
    out.reserve((skews.size() + 1) / 2);
    for (std::size_t i = 0; i < skews.size(); i += 2) {
        long long d = skews[i];
        if (i + 1 < skews.size()) d += skews[i + 1];
        out.push_back(d);
    }
    return out;
}

long long skew_square_sum(const std::vector<long long>& skews) {
    long long s = 0;
    for (long long d : skews) s += d * d;
    return s;
}

long long skew_adjacent_products(const std::vector<long long>& skews) {
    long long r = 0;
    for (std::size_t j = 1; j < skews.size(); j += 2) r += skews[j - 1] * skews[j];
    return r;
}

TelescopeCheck verify_telescoping(const std::vector<long long>& finest_skews) {
    TelescopeCheck check;
    std::vector<long long> level = finest_skews;
    while (level.size() > 1) {
        std::vector<long long> coarse = merge_window_skews(level);
        TelescopeLevel tl;
        tl.s_fine = skew_square_sum(level);
        tl.r_fine = skew_adjacent_products(level);
        tl.s_coarse = skew_square_sum(coarse);
        tl.residual = tl.s_coarse - tl.s_fine - 2 * tl.r_fine;
        if (tl.residual != 0) check.all_zero = false;
        check.levels.push_back(tl);
        level = std::move(coarse);
    }
    return check;
}

std::size_t verify_history(const SkewHistory& history, std::size_t min_windows,
                           bool strict) {
    std::size_t verified = 0;
    for (const SubproblemRecord& rec : history.records) {
        if (rec.window_skews.size() < min_windows) continue;
        TelescopeCheck check = verify_telescoping(rec.window_skews);
        if (!check.all_zero) {
            if (strict)
                throw corruption_error("telescoping residual nonzero on a subproblem");
            continue;
        }
        ++verified;
    }
    return verified;
}

}  // namespace ll
