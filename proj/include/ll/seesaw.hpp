#pragma once
// The see-saw subproblem tree. The array is owned by a recursive tree of
// subproblems; an internal node routes each insert by a pivot fixed at its
// creation, counts the insertion skew of the current rebuild window, and at
// window boundaries rebuilds its children with subarray sizes tilted by an
// array skew proportional to the previous window's insertion skew (even
// windows only). Leaves delegate to the classical labeler: expensive leaves
// are created above 3/4 density, tiny leaves at or below the tiny threshold.
// A subproblem that has absorbed ceil(m_pi/alpha) lifetime inserts (its
// quota) is reset by its parent: destroyed and respread balanced in place.
//
// Window sizes are the one random choice: K in [0,k_max] with
// Pr[K=k] = 2^-(k+1) (1 + k/k_max) for k >= 1, and w = m_pi/(alpha 2^K).
//
// Children are materialized lazily, on the first insert that reaches them;
// a lazily created child sees exactly the slot state its eager twin would,
// because any write into its range would have materialized it first. Only
// the order in which K values are drawn from the shared generator differs.

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "ll/classical.hpp"
#include "ll/core_array.hpp"

namespace ll {

struct SeeSawConfig {
    std::size_t m = 0;
    std::size_t n = 0;  // structural parameter, m/2
    double c_alpha = 16.0;
    double c_beta = 2.0;
    double alpha = 0.0;  // c_alpha * (log2 log2 n)^2
    double beta = 0.0;   // c_beta  * (log2 log2 n)^2
    int k_max = 0;       // floor(2 log2 log2 n)
    std::size_t tiny_threshold = 0;  // ceil(2^sqrt(log2 n))
    std::uint64_t seed = 1;
    bool pma_mode = false;
    std::size_t pma_gap_bound = 8;
    std::size_t max_live = 0;  // defaults to n
    bool record_skews = false;

    static SeeSawConfig make(std::size_t m, double c_alpha = 16.0,
                             double c_beta = 2.0, std::uint64_t seed = 1,
                             bool pma_mode = false);

    std::size_t quota(std::size_t m_pi) const;  // ceil(m_pi / alpha)
    std::size_t window_length(std::size_t m_pi, int k) const;
};

// p_0..p_kmax.
std::vector<double> window_param_pmf(int k_max);
int sample_window_param(const std::vector<double>& pmf, std::mt19937_64& rng);
std::pair<std::size_t, int> pick_window_length(std::size_t m_pi,
                                               const SeeSawConfig& cfg,
                                               std::mt19937_64& rng);

// Array skew for the window about to start (1-based index). Zero for odd
// windows; otherwise round-half-away of m_pi * d_prev / (beta * w_pi).
long long pick_array_skew(std::uint64_t new_window_index, long long d_prev,
                          std::size_t m_pi, std::size_t w_pi,
                          const SeeSawConfig& cfg);

enum class Side { Left, Right };
inline Side route(Key pivot, Key key) {
    return key <= pivot ? Side::Left : Side::Right;
}

// Window-level skew trace of one finished subproblem lifetime.
struct SubproblemRecord {
    std::size_t m_pi = 0;
    std::size_t w = 0;
    int k = 0;
    std::vector<long long> window_skews;   // D per window, in order
    std::vector<long long> applied_skews;  // T applied at each rebuild
};

struct SkewHistory {
    std::vector<SubproblemRecord> records;
};

class Subproblem {
  public:
    enum class Kind { Internal, TinyLeaf, ExpensiveLeaf };

    std::size_t lo = 0, hi = 0;
    std::size_t s_initial = 0;
    std::uint64_t lifetime_inserts = 0;
    Kind kind = Kind::Internal;

    // Internal-only state.
    Key pivot = 0;
    bool has_pivot = false;
    std::size_t left_size = 0;  // current boundary: left child is [lo, lo+left_size)
    std::size_t window_len = 0;
    int window_param = 0;
    std::uint64_t windows_completed = 0;
    std::uint64_t inserts_in_window = 0;
    long long insertion_skew = 0;
    bool skews_frozen = false;  // pma mode, initial density < 0.25

    std::unique_ptr<Subproblem> left, right;       // lazily materialized
    std::unique_ptr<ClassicalLabeler> backend;     // leaves only
    std::vector<long long> window_skew_log;        // when recording
    std::vector<long long> applied_skew_log;

    std::size_t size() const { return hi - lo; }
    bool is_leaf() const { return kind != Kind::Internal; }
};

struct InsertOutcome {
    std::uint64_t moves = 0;
    bool expensive_leaf = false;
    std::size_t depth = 0;
};

class SeeSawTree {
  public:
    SeeSawTree(LabeledArray& array, SeeSawConfig cfg);

    // Spreads keys over the whole array and creates the root subproblem.
    void initialize(std::span<const Key> keys);

    InsertOutcome insert(Key key);

    std::vector<Key> collect_set() const;
    std::size_t live() const { return live_; }

    // Throws corruption_error naming the first violated invariant.
    void check_invariants() const;

    const SeeSawConfig& config() const { return cfg_; }
    Subproblem* root() { return root_.get(); }
    const Subproblem* root() const { return root_.get(); }

    // Materializes and returns the requested child (test hook; inserts use it
    // internally).
    Subproblem& child(Subproblem& p, Side side);

    // Spreads keys over [lo,hi) and classifies the resulting subproblem.
    std::unique_ptr<Subproblem> create_subtree(std::size_t lo, std::size_t hi,
                                               std::span<const Key> keys,
                                               CostCategory cat);
    // Classifies [lo,hi) over the slots as they stand: a tiny leaf at or
    // below the tiny threshold, an expensive leaf above 3/4 density,
    // otherwise an internal node with freshly drawn window parameters.
    // Children materialize on first touch.
    std::unique_ptr<Subproblem> allocate_balanced(std::size_t lo, std::size_t hi);

    std::uint64_t rebuild_count() const { return rebuilds_; }
    std::uint64_t reset_count() const { return resets_; }

    const SkewHistory& history() const { return history_; }
    // Flushes live subproblems into the history and returns it.
    SkewHistory take_history();

  private:
    void insert_rec(Subproblem& p, Key key, InsertOutcome& out, std::size_t depth);
    void skew_rebuild(Subproblem& p);
    void reset_child(Subproblem& p, Side side);
    void flush_history(Subproblem* p);
    void check_rec(const Subproblem& p, bool global) const;

    LabeledArray& array_;
    SeeSawConfig cfg_;
    std::mt19937_64 rng_;
    std::vector<double> pmf_;
    std::unique_ptr<Subproblem> root_;
    std::size_t live_ = 0;
    std::uint64_t rebuilds_ = 0;
    std::uint64_t resets_ = 0;
    SkewHistory history_;
    std::vector<Key> scratch_left_, scratch_right_;
};

}  // namespace ll
