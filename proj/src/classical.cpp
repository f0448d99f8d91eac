#include "ll/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace ll {

namespace {

std::size_t ceil_log2(std::size_t x) {
    return x <= 1 ? 0 : std::bit_width(x - 1);
}

}  // namespace

double ikr_threshold(std::size_t depth, std::size_t height, double tau_root,
                     double tau_leaf) {
    if (height == 0) return tau_leaf;
    return tau_root + (tau_leaf - tau_root) * static_cast<double>(depth) /
                          static_cast<double>(height);
}

ClassicalLabeler::ClassicalLabeler(LabeledArray& array, std::size_t lo,
                                   std::size_t hi, IkrParams params)
    : array_(array), lo_(lo), hi_(hi), params_(params) {
    if (lo >= hi || hi > array.size()) throw std::invalid_argument("bad range");
    std::size_t m = hi - lo;
    chunk_ = params.chunk_override ? params.chunk_override
                                   : std::max<std::size_t>(2, ceil_log2(m));
    chunk_count_ = (m + chunk_ - 1) / chunk_;
    height_ = ceil_log2(chunk_count_);
    load_ = array_.occupied_count(lo_, hi_);
    if (!(params_.tau_root < params_.tau_leaf || height_ == 0) ||
        params_.tau_leaf > 1.0)
        throw std::invalid_argument("need tau_root < tau_leaf <= 1");
}

double ClassicalLabeler::threshold(std::size_t depth) const {
    return ikr_threshold(depth, height_, params_.tau_root, params_.tau_leaf);
}

void ClassicalLabeler::interval_of(std::size_t depth, std::size_t c,
                                   std::size_t& clo, std::size_t& chi) const {
    std::size_t width = std::size_t{1} << (height_ - depth);
    clo = (c / width) * width;
    chi = std::min(chunk_count_, clo + width);
}

std::optional<std::size_t> ClassicalLabeler::predecessor_slot(Key k) const {
    // Binary search over slots; each probe snaps to the nearest occupied slot
    // on its left. Gap runs stay short here (spreads place elements evenly),
    // so the snap scans are cheap.
    std::size_t a = lo_, b = hi_;
    std::optional<std::size_t> best;
    while (b - a > 64) {
        std::size_t mid = a + (b - a) / 2;
        auto s = array_.prev_occupied(a, mid + 1);
        if (!s) {
            a = mid + 1;
        } else if (array_.key_at(*s) < k) {
            best = *s;
            a = mid + 1;
        } else {
            b = *s;
        }
    }
    for (auto s = array_.prev_occupied(a, b); s; ) {
        if (array_.key_at(*s) < k) return *s;
        if (*s == a) break;
        s = array_.prev_occupied(a, *s);
    }
    return best;
}

std::uint64_t ClassicalLabeler::shift_into_chunk(std::size_t c, std::size_t pos,
                                                 Key key, CostCategory cat) {
    std::size_t cs = chunk_slot_lo(c), ce = chunk_slot_hi(c);
    last_rebalance_ = RebalanceInfo{height_, cs, ce};
    pos = std::clamp(pos, cs, ce);
    // Nearest free slot at or right of pos; the run [pos, free) is occupied.
    std::size_t free = pos;
    while (free < ce && array_.occupied(free)) ++free;
    if (free < ce) {
        std::uint64_t moves = 0;
        for (std::size_t q = free; q > pos; --q) {
            array_.move_element(q - 1, q, cat);
            ++moves;
        }
        array_.write_element(pos, key, cat);
        return moves + 1;
    }
    // No room on the right; shift the occupied run ending at pos-1 left.
    std::size_t fl = pos - 1;
    while (array_.occupied(fl)) --fl;  // guaranteed: chunk is not full
    std::uint64_t moves = 0;
    for (std::size_t q = fl; q + 1 < pos; ++q) {
        array_.move_element(q + 1, q, cat);
        ++moves;
    }
    array_.write_element(pos - 1, key, cat);
    return moves + 1;
}

std::uint64_t ClassicalLabeler::respread_with_key(std::size_t slot_lo,
                                                  std::size_t slot_hi, Key key,
                                                  CostCategory cat) {
    std::vector<Key> keys = array_.collect(slot_lo, slot_hi);
    keys.insert(std::upper_bound(keys.begin(), keys.end(), key), key);
    return array_.spread_evenly(slot_lo, slot_hi, keys, cat);
}

std::uint64_t ClassicalLabeler::insert(Key key, CostCategory cat) {
    auto pred = predecessor_slot(key);
    std::size_t pos = pred ? *pred + 1 : lo_;
    if (auto s = array_.next_occupied(pos, hi_); s && array_.key_at(*s) == key)
        throw duplicate_key_error("key already present");

    std::size_t c = (std::min(pos, hi_ - 1) - lo_) / chunk_;
    std::size_t cs = chunk_slot_lo(c), ce = chunk_slot_hi(c);
    std::size_t chunk_occ = array_.occupied_count(cs, ce);
    if (static_cast<double>(chunk_occ + 1) <=
        threshold(height_) * static_cast<double>(ce - cs)) {
        ++load_;
        return shift_into_chunk(c, pos, key, cat);
    }

    // Walk up; d = height_-1 .. 0, smallest satisfying interval wins.
    for (std::size_t up = 1; up <= height_; ++up) {
        std::size_t d = height_ - up;
        std::size_t clo, chi;
        interval_of(d, c, clo, chi);
        std::size_t slo = chunk_slot_lo(clo);
        std::size_t shi = std::min(hi_, lo_ + chi * chunk_);
        std::size_t occ = array_.occupied_count(slo, shi);
        if (static_cast<double>(occ + 1) <=
            threshold(d) * static_cast<double>(shi - slo)) {
            last_rebalance_ = RebalanceInfo{d, slo, shi};
            ++load_;
            return respread_with_key(slo, shi, key, cat);
        }
    }

    // Even the root interval is over threshold. While the range has physical
    // room we respread the whole of it; under the see-saw tree this only
    // happens for leaves of a few dozen slots, where the threshold grid is
    // coarser than the load bound.
    if (load_ + 1 <= hi_ - lo_) {
        last_rebalance_ = RebalanceInfo{0, lo_, hi_};
        ++load_;
        return respread_with_key(lo_, hi_, key, cat);
    }
    throw capacity_error("classical range full");
}

}  // namespace ll
