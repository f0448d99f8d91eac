#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "ll/core_array.hpp"

using namespace ll;

TEST_CASE("write_element places a key and charges one move") {
    LabeledArray a(8);
    a.write_element(3, 7, CostCategory::LeafLocal);
    CHECK(a.ledger().total_moves() == 1);
    CHECK(a.occupied_count(0, 8) == 1);
    CHECK(a.occupied(3));
    CHECK(a.key_at(3) == 7);
}

TEST_CASE("write_element keeps order against existing neighbors") {
    LabeledArray a(8);
    a.write_element(4, 7, CostCategory::LeafLocal);
    a.write_element(2, 5, CostCategory::LeafLocal);
    CHECK(a.collect(0, 8) == std::vector<Key>{5, 7});
    CHECK(a.ledger().total_moves() == 2);
}

TEST_CASE("write into an occupied slot is corruption") {
    LabeledArray a(8);
    a.write_element(1, 10, CostCategory::LeafLocal);
    CHECK_THROWS_AS(a.write_element(1, 11, CostCategory::LeafLocal), corruption_error);
}

TEST_CASE("order-breaking writes are corruption") {
    LabeledArray a(8);
    a.write_element(2, 50, CostCategory::LeafLocal);
    CHECK_THROWS_AS(a.write_element(5, 40, CostCategory::LeafLocal), corruption_error);
    CHECK_THROWS_AS(a.write_element(0, 60, CostCategory::LeafLocal), corruption_error);
    CHECK_THROWS_AS(a.write_element(5, 50, CostCategory::LeafLocal), corruption_error);
}

TEST_CASE("spread_evenly places keys at floor(i*range/s)") {
    LabeledArray a(8);
    std::vector<Key> keys{10, 20, 30};
    std::size_t cost = a.spread_evenly(0, 6, keys, CostCategory::Rebuild);
    CHECK(cost == 3);
    CHECK(a.occupied(0));
    CHECK(a.occupied(2));
    CHECK(a.occupied(4));
    CHECK(a.occupied_count(0, 6) == 3);
    CHECK(a.key_at(0) == 10);
    CHECK(a.key_at(2) == 20);
    CHECK(a.key_at(4) == 30);

    SUBCASE("occupied_count over subranges") {
        CHECK(a.occupied_count(0, 0) == 0);
        CHECK(a.occupied_count(2, 5) == 2);
    }
}

TEST_CASE("spread_evenly of nothing clears the range at zero cost") {
    LabeledArray a(4);
    a.write_element(1, 5, CostCategory::LeafLocal);
    std::size_t cost = a.spread_evenly(0, 4, {}, CostCategory::Rebuild);
    CHECK(cost == 0);
    CHECK(a.occupied_count(0, 4) == 0);
}

TEST_CASE("spread_evenly packs a full range") {
    LabeledArray a(3);
    std::vector<Key> keys{1, 2, 3};
    CHECK(a.spread_evenly(0, 3, keys, CostCategory::Rebuild) == 3);
    CHECK(a.collect(0, 3) == keys);
}

TEST_CASE("spread_evenly rejects overfull batches") {
    LabeledArray a(4);
    std::vector<Key> keys{1, 2, 3, 4, 5};
    CHECK_THROWS_AS(a.spread_evenly(0, 4, keys, CostCategory::Rebuild), capacity_error);
}

TEST_CASE("ledger total equals writes and splits by category") {
    LabeledArray a(16);
    std::vector<Key> keys{2, 4, 6, 8};
    a.spread_evenly(0, 16, keys, CostCategory::Rebuild);
    a.write_element(15, 100, CostCategory::ExpensiveLeafLocal);
    a.move_element(15, 14, CostCategory::Reset);
    CHECK(a.ledger().moves(CostCategory::Rebuild) == 4);
    CHECK(a.ledger().moves(CostCategory::ExpensiveLeafLocal) == 1);
    CHECK(a.ledger().moves(CostCategory::Reset) == 1);
    CHECK(a.ledger().total_moves() == 6);
}

TEST_CASE("occupancy scan helpers") {
    LabeledArray a(256);
    a.write_element(3, 10, CostCategory::LeafLocal);
    a.write_element(130, 20, CostCategory::LeafLocal);
    a.write_element(200, 30, CostCategory::LeafLocal);
    CHECK(*a.prev_occupied(0, 256) == 200);
    CHECK(*a.next_occupied(0, 256) == 3);
    CHECK(*a.next_occupied(4, 256) == 130);
    CHECK(*a.prev_occupied(0, 130) == 3);
    CHECK(!a.prev_occupied(4, 130));
    CHECK(a.max_interior_gap() == 126);
    a.clear_slot(130);
    CHECK(a.max_interior_gap() == 196);
}

TEST_CASE("random spreads and writes track a reference sorted list") {
    std::mt19937_64 rng(7);
    LabeledArray a(512);
    std::vector<Key> reference;
    for (int round = 0; round < 200; ++round) {
        Key k = (rng() % 1000000) * 2 + 1;
        if (std::find(reference.begin(), reference.end(), k) != reference.end())
            continue;
        reference.insert(std::upper_bound(reference.begin(), reference.end(), k), k);
        a.spread_evenly(0, 512, reference, CostCategory::Rebuild);
        a.verify_sorted();
        CHECK(a.collect(0, 512) == reference);
        CHECK(a.live_count() == reference.size());
    }
    CHECK(a.ledger().total_moves() > 0);
}
