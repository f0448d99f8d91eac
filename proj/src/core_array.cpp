#include "ll/core_array.hpp"

#include <bit>

namespace ll {

namespace {

std::size_t word_count(std::size_t m) { return (m + 63) / 64; }

}  // namespace

LabeledArray::LabeledArray(std::size_t m)
    : m_(m), keys_(m), occ_(word_count(m), 0) {
    if (m == 0) throw std::invalid_argument("array size must be positive");
}

void LabeledArray::write_element(std::size_t slot, Key key, CostCategory cat) {
    if (slot >= m_) throw std::out_of_range("slot out of range");
    if (occupied(slot))
        throw corruption_error("write into occupied slot " + std::to_string(slot));
    if (order_checks_) {
        if (auto p = prev_occupied(0, slot); p && keys_[*p] >= key)
            throw corruption_error("write breaks sortedness on the left");
        if (auto s = next_occupied(slot + 1, m_); s && keys_[*s] <= key)
            throw corruption_error("write breaks sortedness on the right");
    }
    place_raw(slot, key);
    ++live_;
    ledger_.charge(cat);
}

void LabeledArray::clear_slot(std::size_t slot) {
    if (slot >= m_ || !occupied(slot))
        throw corruption_error("clear of empty slot " + std::to_string(slot));
    erase_raw(slot);
    --live_;
}

void LabeledArray::move_element(std::size_t from, std::size_t to, CostCategory cat) {
    Key k = keys_[from];
    clear_slot(from);
    write_element(to, k, cat);
}

void LabeledArray::clear_range_raw(std::size_t lo, std::size_t hi) {
    live_ -= occupied_count(lo, hi);
    std::size_t wl = lo >> 6, wh = (hi == 0) ? 0 : ((hi - 1) >> 6);
    if (lo >= hi) return;
    std::uint64_t first_mask = ~0ull << (lo & 63);
    std::uint64_t last_mask = (hi & 63) ? ((std::uint64_t{1} << (hi & 63)) - 1) : ~0ull;
    if (wl == wh) {
        occ_[wl] &= ~(first_mask & last_mask);
        return;
    }
    occ_[wl] &= ~first_mask;
    for (std::size_t w = wl + 1; w < wh; ++w) occ_[w] = 0;
    occ_[wh] &= ~last_mask;
}

std::size_t LabeledArray::spread_evenly(std::size_t lo, std::size_t hi,
                                        std::span<const Key> keys, CostCategory cat) {
    if (lo > hi || hi > m_) throw std::out_of_range("bad range");
    std::size_t span = hi - lo;
    std::size_t s = keys.size();
    if (s > span) throw capacity_error("spread of " + std::to_string(s) +
                                       " keys into " + std::to_string(span) + " slots");
    if (order_checks_ && s > 0) {
        for (std::size_t i = 1; i < s; ++i)
            if (keys[i - 1] >= keys[i])
                throw corruption_error("spread keys not strictly increasing");
        if (auto p = prev_occupied(0, lo); p && keys_[*p] >= keys.front())
            throw corruption_error("spread breaks sortedness on the left");
        if (auto n = next_occupied(hi, m_); n && keys_[*n] <= keys.back())
            throw corruption_error("spread breaks sortedness on the right");
    }
    clear_range_raw(lo, hi);
    if (s > 0) {
        // pos_i = lo + floor(i*span/s) via an error accumulator; no divisions
        // in the loop.
        std::size_t step = span / s, rem = span % s;
        std::size_t pos = lo, err = 0;
        for (std::size_t i = 0; i < s; ++i) {
            place_raw(pos, keys[i]);
            pos += step;
            err += rem;
            if (err >= s) {
                err -= s;
                ++pos;
            }
        }
        live_ += s;
    }
    ledger_.charge(cat, s);
    return s;
}

std::size_t LabeledArray::occupied_count(std::size_t lo, std::size_t hi) const {
    if (lo >= hi) return 0;
    std::size_t wl = lo >> 6, wh = (hi - 1) >> 6;
    std::uint64_t first_mask = ~0ull << (lo & 63);
    std::uint64_t last_mask = (hi & 63) ? ((std::uint64_t{1} << (hi & 63)) - 1) : ~0ull;
    if (wl == wh) return std::popcount(occ_[wl] & first_mask & last_mask);
    std::size_t c = std::popcount(occ_[wl] & first_mask);
    for (std::size_t w = wl + 1; w < wh; ++w) c += std::popcount(occ_[w]);
    c += std::popcount(occ_[wh] & last_mask);
    return c;
}

void LabeledArray::collect(std::size_t lo, std::size_t hi, std::vector<Key>& out) const {
    if (lo >= hi) return;
    std::size_t wl = lo >> 6, wh = (hi - 1) >> 6;
    for (std::size_t w = wl; w <= wh; ++w) {
        std::uint64_t bits = occ_[w];
        if (w == wl) bits &= ~0ull << (lo & 63);
        if (w == wh && (hi & 63)) bits &= (std::uint64_t{1} << (hi & 63)) - 1;
        while (bits) {
            unsigned b = std::countr_zero(bits);
            out.push_back(keys_[(w << 6) + b]);
            bits &= bits - 1;
        }
    }
}

std::vector<Key> LabeledArray::collect(std::size_t lo, std::size_t hi) const {
    std::vector<Key> out;
    out.reserve(occupied_count(lo, hi));
    collect(lo, hi, out);
    return out;
}

std::optional<std::size_t> LabeledArray::prev_occupied(std::size_t lo, std::size_t hi) const {
    if (lo >= hi) return std::nullopt;
    std::size_t wl = lo >> 6;
    std::size_t w = (hi - 1) >> 6;
    std::uint64_t bits = occ_[w];
    if (hi & 63) bits &= (std::uint64_t{1} << (hi & 63)) - 1;
    for (;;) {
        if (w == wl) bits &= ~0ull << (lo & 63);
        if (bits) return (w << 6) + (63 - std::countl_zero(bits));
        if (w == wl) return std::nullopt;
        bits = occ_[--w];
    }
}

std::optional<std::size_t> LabeledArray::next_occupied(std::size_t lo, std::size_t hi) const {
    if (lo >= hi) return std::nullopt;
    std::size_t wh = (hi - 1) >> 6;
    std::size_t w = lo >> 6;
    std::uint64_t bits = occ_[w] & (~0ull << (lo & 63));
    for (;;) {
        if (w == wh && (hi & 63)) bits &= (std::uint64_t{1} << (hi & 63)) - 1;
        if (bits) return (w << 6) + std::countr_zero(bits);
        if (w == wh) return std::nullopt;
        bits = occ_[++w];
    }
}

std::size_t LabeledArray::max_interior_gap() const {
    std::size_t best = 0;
    std::optional<std::size_t> prev;
    for (std::size_t w = 0; w < occ_.size(); ++w) {
        std::uint64_t bits = occ_[w];
        while (bits) {
            unsigned b = std::countr_zero(bits);
            std::size_t slot = (w << 6) + b;
            if (prev && slot - *prev - 1 > best) best = slot - *prev - 1;
            prev = slot;
            bits &= bits - 1;
        }
    }
    return best;
}

void LabeledArray::verify_sorted() const {
    bool have = false;
    Key last = 0;
    for (std::size_t w = 0; w < occ_.size(); ++w) {
        std::uint64_t bits = occ_[w];
        while (bits) {
            unsigned b = std::countr_zero(bits);
            Key k = keys_[(w << 6) + b];
            if (have && k <= last)
                throw corruption_error("array keys not strictly increasing");
            last = k;
            have = true;
            bits &= bits - 1;
        }
    }
}

}  // namespace ll
