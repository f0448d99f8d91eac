#pragma once
// Reductions from the insert-only half-full core to a fully dynamic labeler.
//
// DynamicLabeler batches deletions: a deleted key stays in place as a
// tombstone until ceil(gamma*m) of them (gamma = delta/3) accumulate, then
// the whole structure is rebuilt without them. Re-inserting a tombstoned key
// makes a fresh element that coexists with the tombstone until that rebuild;
// user keys are mapped to (key<<1 | generation) internally so the two occupy
// distinct, correctly ordered slots.
//
// IncrementSimulation runs a backend on a half-full virtual array of size
// 2n', n' = 2*floor(delta*m/3), and mirrors it into the denser real array:
// items are visible (present in the virtual array) or invisible; invisible
// items form blocks of at most ceil(3/delta)-1 that immediately follow their
// visible predecessor, with no free real slot directly left of an invisible
// item. Stripping invisible items and their slots from the real array yields
// the virtual array.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ll/classical.hpp"
#include "ll/core_array.hpp"
#include "ll/seesaw.hpp"
#include "ll/workloads.hpp"

namespace ll {

enum class BackendKind { SeeSaw, Classical };

struct BackendOptions {
    double c_alpha = 16.0;
    double c_beta = 2.0;
    std::uint64_t seed = 1;
    bool pma_mode = false;
    bool record_skews = false;
    IkrParams ikr{};
};

// Insert-only structure over a whole array; both algorithms behind one face.
class InsertBackend {
  public:
    InsertBackend(LabeledArray& array, BackendKind kind, BackendOptions opts,
                  std::size_t max_live);
    // Spreads keys and builds the structure over them.
    void initialize(std::span<const Key> keys);
    InsertOutcome insert(Key key);
    void check_invariants() const;
    SeeSawTree* tree() { return tree_.get(); }

  private:
    LabeledArray& array_;
    BackendKind kind_;
    BackendOptions opts_;
    std::size_t max_live_;
    std::unique_ptr<SeeSawTree> tree_;
    std::unique_ptr<ClassicalLabeler> classical_;
};

class DynamicLabeler {
  public:
    DynamicLabeler(std::size_t m, double delta, BackendKind backend,
                   BackendOptions opts = {});

    std::uint64_t insert(Key key);  // moves charged for this op
    std::uint64_t erase(Key key);   // 0 unless the op triggered a batch rebuild

    std::size_t live() const { return live_; }
    std::vector<Key> live_keys() const;  // sorted user keys

    std::size_t batch_threshold() const { return batch_threshold_; }
    std::uint64_t rebuild_count() const { return rebuilds_; }
    std::size_t tombstone_count() const { return tombstones_.size(); }
    std::size_t max_live() const { return cap_live_; }

    LabeledArray& array() { return array_; }
    const LabeledArray& array() const { return array_; }
    CostLedger& ledger() { return array_.ledger(); }

    void check_invariants() const;

  private:
    void rebuild_without_tombstones();

    std::size_t m_;
    double delta_;
    BackendKind backend_kind_;
    BackendOptions opts_;
    std::size_t cap_live_;
    std::size_t batch_threshold_;
    LabeledArray array_;
    std::unique_ptr<InsertBackend> backend_;
    // Per user key: which internal generations exist, and which one is live.
    struct KeyState {
        std::uint8_t copies = 0;  // bit g set = internal key (u<<1|g) placed
        std::int8_t live_gen = -1;
    };
    std::unordered_map<Key, KeyState> states_;
    std::unordered_set<Key> tombstones_;  // internal keys
    std::size_t live_ = 0;
    std::uint64_t rebuilds_ = 0;
};

// 1-based ranks: every ceil(3/delta)-th starting at 1, topped up with the
// smallest unused ranks to exactly n_prime/2.
std::vector<std::size_t> select_visible(std::size_t initial_count, double delta,
                                        std::size_t n_prime);

class IncrementSimulation {
  public:
    // empty_count = number of free real slots; effective delta is
    // empty_count / real.size().
    IncrementSimulation(LabeledArray& real, std::size_t empty_count,
                        BackendKind backend, BackendOptions opts,
                        bool check = false);

    // Builds the virtual array from the visible items and rearranges the
    // real array to mirror it (at most one move per item).
    void start();

    // Mirrors one backend insert; returns real moves charged.
    std::uint64_t insert(Key key);

    std::size_t capacity_remaining() const { return mirror_capacity_; }
    std::size_t n_prime() const { return n_prime_; }
    std::size_t block_bound() const { return spacing_ - 1; }
    std::size_t spacing() const { return spacing_; }
    const LabeledArray& virtual_array() const { return virtual_array_; }

    // Invariants (1) no free slot left of an invisible item, (2) stripping
    // invisible slots reproduces the virtual array, (3) block sizes.
    void check_invariants() const;

    // True when the visible-rank pattern cannot fit n_prime/2 items; callers
    // fall back to whole-array respreads.
    static bool pattern_overflow(std::size_t initial_count, std::size_t empty_count,
                                 std::size_t m);

  private:
    std::vector<Key> target_layout() const;
    std::uint64_t apply_layout(const std::vector<Key>& target, CostCategory cat);

    LabeledArray& real_;
    std::size_t m_;
    std::size_t empty_count_;
    std::size_t spacing_;
    std::size_t n_prime_;
    std::size_t mirror_capacity_;
    bool check_;
    LabeledArray virtual_array_;
    std::unique_ptr<InsertBackend> backend_;
    // The invisible key set is fixed for the phase; an insert between two
    // invisible keys splits their run, so runs are derived from sort order.
    std::vector<Key> inv_sorted_;
    std::unordered_set<Key> invisible_;
};

struct FillResult {
    std::uint64_t total_moves = 0;
    std::size_t phases = 0;
    std::vector<std::size_t> phase_inserts;
};

// Fills an empty array of size m = keys.size() to full: phase 0 inserts
// floor(m/2) keys through the backend, then each phase inserts ceil(e/3)
// keys via an increment simulation until the array is full.
FillResult fill_from_empty(LabeledArray& array, std::span<const Key> keys,
                           BackendKind backend, BackendOptions opts = {},
                           bool check = false);

}  // namespace ll
