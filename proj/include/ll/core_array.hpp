#pragma once
// Slot array primitives for list labeling: a fixed-size array of optionally
// occupied slots whose occupied keys must read strictly increasing, plus the
// move meter that every structure charges against. All slot mutation anywhere
// in the project funnels through this class.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ll {

using Key = std::uint64_t;

// Internal state violated an invariant that callers cannot cause through the
// public API (slot collisions, order breaks, impossible skews).
struct corruption_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct duplicate_key_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct missing_key_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Cost groups: rebuilds at window boundaries, quota resets, leaf-local work,
// and leaf-local work inside expensive (dense) leaves.
enum class CostCategory : unsigned {
    Rebuild = 0,
    Reset = 1,
    LeafLocal = 2,
    ExpensiveLeafLocal = 3,
};

inline constexpr std::size_t kCostCategoryCount = 4;

struct CostLedger {
    std::array<std::uint64_t, kCostCategoryCount> moves_by_category{};
    std::uint64_t expensive_leaf_arrivals = 0;
    std::uint64_t total_inserts = 0;
    std::uint64_t total_deletes = 0;

    void charge(CostCategory c, std::uint64_t count = 1) {
        moves_by_category[static_cast<unsigned>(c)] += count;
    }
    std::uint64_t moves(CostCategory c) const {
        return moves_by_category[static_cast<unsigned>(c)];
    }
    // Equals the number of slot writes performed since construction (or the
    // last reset): every write charges exactly one category.
    std::uint64_t total_moves() const {
        std::uint64_t t = 0;
        for (auto v : moves_by_category) t += v;
        return t;
    }
    void reset() { *this = CostLedger{}; }
};

class LabeledArray {
  public:
    explicit LabeledArray(std::size_t m);

    std::size_t size() const { return m_; }
    std::size_t live_count() const { return live_; }

    bool occupied(std::size_t slot) const {
        return (occ_[slot >> 6] >> (slot & 63)) & 1u;
    }
    Key key_at(std::size_t slot) const { return keys_[slot]; }

    // Places a key in an empty slot and charges one move. With order checks
    // enabled (the default), the nearest occupied neighbors are validated.
    void write_element(std::size_t slot, Key key, CostCategory cat);

    void clear_slot(std::size_t slot);

    // clear_slot + write_element as a single move (one charge). Used by
    // chunk-local shifting, where per-element transit keeps the scan ordered.
    void move_element(std::size_t from, std::size_t to, CostCategory cat);

    // Empties [lo,hi) and writes the i-th key at lo + floor(i*(hi-lo)/s).
    // Keys must be sorted and fit in the range; boundary slots outside the
    // range are checked once instead of per write. Returns the cost, which is
    // always exactly keys.size().
    std::size_t spread_evenly(std::size_t lo, std::size_t hi,
                              std::span<const Key> keys, CostCategory cat);

    // Empties every slot in [lo,hi). Clearing moves nothing, so no charge.
    void clear_range(std::size_t lo, std::size_t hi) {
        if (lo > hi || hi > m_) throw std::out_of_range("bad range");
        clear_range_raw(lo, hi);
    }

    std::size_t occupied_count(std::size_t lo, std::size_t hi) const;

    void collect(std::size_t lo, std::size_t hi, std::vector<Key>& out) const;
    std::vector<Key> collect(std::size_t lo, std::size_t hi) const;

    // Largest occupied slot in [lo, hi), if any.
    std::optional<std::size_t> prev_occupied(std::size_t lo, std::size_t hi) const;
    // Smallest occupied slot in [lo, hi), if any.
    std::optional<std::size_t> next_occupied(std::size_t lo, std::size_t hi) const;

    // Longest run of empty slots strictly between two occupied slots.
    std::size_t max_interior_gap() const;

    // Full scan; throws corruption_error if occupied keys are not strictly
    // increasing. Test / --check oracle.
    void verify_sorted() const;

    void set_order_checks(bool enabled) { order_checks_ = enabled; }
    bool order_checks() const { return order_checks_; }

    CostLedger& ledger() { return ledger_; }
    const CostLedger& ledger() const { return ledger_; }

  private:
    void place_raw(std::size_t slot, Key key) {
        keys_[slot] = key;
        occ_[slot >> 6] |= (std::uint64_t{1} << (slot & 63));
    }
    void erase_raw(std::size_t slot) {
        occ_[slot >> 6] &= ~(std::uint64_t{1} << (slot & 63));
    }
    void clear_range_raw(std::size_t lo, std::size_t hi);

    std::size_t m_;
    std::size_t live_ = 0;
    bool order_checks_ = true;
    std::vector<Key> keys_;
    std::vector<std::uint64_t> occ_;
    CostLedger ledger_;
};

}  // namespace ll
