#pragma once
// The Itai-Konheim-Rodeh rebalancing scheme over a subrange of a LabeledArray.
// The range is cut into chunks of ~log2(size) slots; implicit dyadic intervals
// over the chunk index space carry density thresholds that interpolate from
// tau_root at the whole range to tau_leaf at a single chunk. An insert shifts
// within its chunk while the chunk has room, otherwise it respreads the
// smallest enclosing interval whose post-insert density stays under threshold.

#include <cstdint>
#include <optional>

#include "ll/core_array.hpp"

namespace ll {

struct IkrParams {
    double tau_root = 0.86;
    double tau_leaf = 1.0;
    std::size_t chunk_override = 0;  // 0 = max(2, ceil(log2(size)))
};

// Linear interpolation tau_root + (tau_leaf - tau_root) * d / h; the single
// threshold at height 0 is tau_leaf.
double ikr_threshold(std::size_t depth, std::size_t height, double tau_root,
                     double tau_leaf);

class ClassicalLabeler {
  public:
    // Adopts the elements currently placed in [lo,hi) without moving them.
    ClassicalLabeler(LabeledArray& array, std::size_t lo, std::size_t hi,
                     IkrParams params = {});

    // Stores key in order; returns the number of moves charged. Throws
    // duplicate_key_error if the key is present, capacity_error when the
    // range is physically full.
    std::uint64_t insert(Key key, CostCategory cat);

    std::size_t lo() const { return lo_; }
    std::size_t hi() const { return hi_; }
    std::size_t size() const { return hi_ - lo_; }
    std::size_t load() const { return load_; }
    std::size_t chunk() const { return chunk_; }
    std::size_t chunk_count() const { return chunk_count_; }
    std::size_t height() const { return height_; }
    double threshold(std::size_t depth) const;

    // Slot range of the last rebalance (chunk shift or interval respread);
    // everything an insert writes stays inside it.
    struct RebalanceInfo {
        std::size_t depth;
        std::size_t lo;
        std::size_t hi;
    };
    const std::optional<RebalanceInfo>& last_rebalance() const {
        return last_rebalance_;
    }

  private:
    // Chunk c covers slots [lo_ + c*chunk_, min(hi_, lo_ + (c+1)*chunk_)).
    std::size_t chunk_slot_lo(std::size_t c) const { return lo_ + c * chunk_; }
    std::size_t chunk_slot_hi(std::size_t c) const {
        std::size_t e = lo_ + (c + 1) * chunk_;
        return e < hi_ ? e : hi_;
    }
    // Dyadic interval of depth d containing chunk c, as a chunk range.
    void interval_of(std::size_t depth, std::size_t c, std::size_t& clo,
                     std::size_t& chi) const;

    // Largest occupied slot in range with key < k, or nullopt.
    std::optional<std::size_t> predecessor_slot(Key k) const;

    std::uint64_t shift_into_chunk(std::size_t c, std::size_t pos, Key key,
                                   CostCategory cat);
    std::uint64_t respread_with_key(std::size_t slot_lo, std::size_t slot_hi,
                                    Key key, CostCategory cat);

    LabeledArray& array_;
    std::size_t lo_, hi_;
    IkrParams params_;
    std::size_t chunk_;
    std::size_t chunk_count_;
    std::size_t height_;
    std::size_t load_;
    std::optional<RebalanceInfo> last_rebalance_;
};

}  // namespace ll
