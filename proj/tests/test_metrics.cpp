#include <doctest.h>

#include <random>

#include "ll/metrics.hpp"

using namespace ll;

TEST_CASE("telescoping identity on the worked example") {
    std::vector<long long> d2{2, -1, 3, 1};
    CHECK(skew_square_sum(d2) == 15);
    std::vector<long long> d1 = merge_window_skews(d2);
    CHECK(d1 == std::vector<long long>{1, 4});
    CHECK(skew_square_sum(d1) == 17);
    CHECK(skew_adjacent_products(d2) == 1);

    TelescopeCheck check = verify_telescoping(d2);
    REQUIRE(check.levels.size() == 2);
    CHECK(check.levels[0].s_fine == 15);
    CHECK(check.levels[0].s_coarse == 17);
    CHECK(check.levels[0].r_fine == 1);
    CHECK(check.levels[0].residual == 0);
    CHECK(check.all_zero);
}

TEST_CASE("all-zero skews give zero sums at every level") {
    std::vector<long long> d(8, 0);
    TelescopeCheck check = verify_telescoping(d);
    CHECK(check.all_zero);
    for (const auto& level : check.levels) {
        CHECK(level.s_fine == 0);
        CHECK(level.s_coarse == 0);
        CHECK(level.r_fine == 0);
    }
}

TEST_CASE("a single window has no products and a constant square sum") {
    std::vector<long long> d{-7};
    CHECK(skew_adjacent_products(d) == 0);
    CHECK(skew_square_sum(d) == 49);
    TelescopeCheck check = verify_telescoping(d);
    CHECK(check.levels.empty());
    CHECK(check.all_zero);
}

TEST_CASE("odd trailing windows merge with an empty half") {
    std::vector<long long> d{3, -2, 5};
    std::vector<long long> merged = merge_window_skews(d);
    CHECK(merged == std::vector<long long>{1, 5});
    CHECK(skew_adjacent_products(d) == -6);  // only the (1,2) pair
    CHECK(verify_telescoping(d).all_zero);
}

TEST_CASE("residuals are exactly zero for arbitrary integer skews") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 200; ++round) {
        std::size_t len = 1 + rng() % 40;
        std::vector<long long> d(len);
        for (auto& v : d) v = static_cast<long long>(rng() % 2001) - 1000;
        TelescopeCheck check = verify_telescoping(d);
        REQUIRE(check.all_zero);
        for (const auto& level : check.levels) CHECK(level.residual == 0);
    }
}

TEST_CASE("verify_history counts and filters by window count") {
    SkewHistory h;
    SubproblemRecord a;
    a.window_skews = {1, 2, 3, 4};
    SubproblemRecord b;
    b.window_skews = {5};
    h.records.push_back(a);
    h.records.push_back(b);
    CHECK(verify_history(h, 4) == 1);
    CHECK(verify_history(h, 1) == 2);
    CHECK(verify_history(h, 5) == 0);
}

TEST_CASE("summarize folds the ledger into a report") {
    CostLedger ledger;
    RunMeta meta{"seesaw", 1024, 2048, "hammer", 7, 0, 0, 1.5};

    SUBCASE("zero ops leave every counter at zero") {
        RunReport r = summarize(ledger, meta);
        CHECK(r.total_moves == 0);
        CHECK(r.moves_per_op == 0.0);
        CHECK(r.expensive_leaf_arrival_fraction == 0.0);
    }

    SUBCASE("category sums re-add to the total") {
        ledger.charge(CostCategory::Rebuild, 10);
        ledger.charge(CostCategory::Reset, 20);
        ledger.charge(CostCategory::LeafLocal, 30);
        ledger.charge(CostCategory::ExpensiveLeafLocal, 40);
        ledger.expensive_leaf_arrivals = 5;
        meta.ops = 50;
        RunReport r = summarize(ledger, meta);
        CHECK(r.total_moves == 100);
        CHECK(r.rebuild_moves + r.reset_moves + r.leaf_moves +
                  r.expensive_leaf_moves ==
              r.total_moves);
        CHECK(r.moves_per_op == doctest::Approx(2.0));
        CHECK(r.expensive_leaf_arrival_fraction == doctest::Approx(0.1));
        CHECK(r.algo == "seesaw");
        CHECK(r.n == 1024);
    }
}
