#include "ll/reductions.hpp"

#include <algorithm>
#include <cmath>

namespace ll {

namespace {

// Whole-array respread with one extra key merged in.
std::uint64_t respread_with_key(LabeledArray& array, Key key, CostCategory cat) {
    std::vector<Key> keys = array.collect(0, array.size());
    keys.insert(std::upper_bound(keys.begin(), keys.end(), key), key);
    array.clear_range(0, array.size());
    return array.spread_evenly(0, array.size(), keys, cat);
}

}  // namespace

InsertBackend::InsertBackend(LabeledArray& array, BackendKind kind,
                             BackendOptions opts, std::size_t max_live)
    : array_(array), kind_(kind), opts_(opts), max_live_(max_live) {
    if (array.size() < 16) kind_ = BackendKind::Classical;  // see-saw floor
}

void InsertBackend::initialize(std::span<const Key> keys) {
    if (kind_ == BackendKind::SeeSaw) {
        SeeSawConfig cfg = SeeSawConfig::make(array_.size(), opts_.c_alpha,
                                              opts_.c_beta, opts_.seed,
                                              opts_.pma_mode);
        cfg.max_live = max_live_;
        cfg.record_skews = opts_.record_skews;
        tree_ = std::make_unique<SeeSawTree>(array_, cfg);
        tree_->initialize(keys);
    } else {
        array_.spread_evenly(0, array_.size(), keys, CostCategory::Rebuild);
        classical_ = std::make_unique<ClassicalLabeler>(array_, 0, array_.size(),
                                                        opts_.ikr);
    }
}

InsertOutcome InsertBackend::insert(Key key) {
    if (tree_) return tree_->insert(key);
    if (classical_->load() >= max_live_)
        throw capacity_error("structure at max load");
    InsertOutcome out;
    out.moves = classical_->insert(key, CostCategory::LeafLocal);
    out.depth = 1;
    array_.ledger().total_inserts += 1;
    return out;
}

void InsertBackend::check_invariants() const {
    if (tree_) {
        tree_->check_invariants();
    } else {
        array_.verify_sorted();
    }
}

DynamicLabeler::DynamicLabeler(std::size_t m, double delta, BackendKind backend,
                               BackendOptions opts)
    : m_(m),
      delta_(delta),
      backend_kind_(backend),
      opts_(opts),
      array_(m) {
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("delta must be in (0,1)");
    cap_live_ = static_cast<std::size_t>((1.0 - delta) * static_cast<double>(m));
    batch_threshold_ = static_cast<std::size_t>(
        std::ceil(delta / 3.0 * static_cast<double>(m)));
    if (batch_threshold_ == 0) batch_threshold_ = 1;
    backend_ = std::make_unique<InsertBackend>(array_, backend_kind_, opts_,
                                               cap_live_ + batch_threshold_);
    backend_->initialize({});
}

std::uint64_t DynamicLabeler::insert(Key user) {
    if (user >= kKeySpace)
        throw std::invalid_argument("key outside the 63-bit space");
    if (live_ >= cap_live_) throw capacity_error("live load at (1-delta)m");
    std::uint64_t before = array_.ledger().total_moves();
    {
        auto it = states_.find(user);
        if (it != states_.end() && it->second.live_gen >= 0)
            throw duplicate_key_error("key already live");
    }
    int gen;
    {
        std::uint8_t copies = states_[user].copies;
        if (!(copies & 1)) {
            gen = 0;
        } else if (!(copies & 2)) {
            gen = 1;
        } else {
            // Both generations of this key sit in the array (one live is
            // impossible here, so both are tombstones): purge early.
            rebuild_without_tombstones();
            gen = 0;
        }
    }
    backend_->insert((user << 1) | static_cast<Key>(gen));
    KeyState& st = states_[user];
    st.copies |= static_cast<std::uint8_t>(1 << gen);
    st.live_gen = static_cast<std::int8_t>(gen);
    ++live_;
    return array_.ledger().total_moves() - before;
}

std::uint64_t DynamicLabeler::erase(Key user) {
    auto it = states_.find(user);
    if (it == states_.end() || it->second.live_gen < 0)
        throw missing_key_error("key not live");
    std::uint64_t before = array_.ledger().total_moves();
    Key internal = (user << 1) | static_cast<Key>(it->second.live_gen);
    tombstones_.insert(internal);
    it->second.live_gen = -1;
    --live_;
    array_.ledger().total_deletes += 1;
    if (tombstones_.size() >= batch_threshold_) rebuild_without_tombstones();
    return array_.ledger().total_moves() - before;
}

void DynamicLabeler::rebuild_without_tombstones() {
    std::vector<Key> internal = array_.collect(0, m_);
    std::vector<Key> survivors;
    survivors.reserve(internal.size());
    for (Key k : internal) {
        if (tombstones_.count(k)) {
            Key user = k >> 1;
            auto it = states_.find(user);
            it->second.copies &= static_cast<std::uint8_t>(~(1 << (k & 1)));
            if (it->second.copies == 0 && it->second.live_gen < 0)
                states_.erase(it);
        } else {
            survivors.push_back(k);
        }
    }
    tombstones_.clear();
    array_.clear_range(0, m_);
    ++rebuilds_;
    BackendOptions opts = opts_;
    opts.seed = opts_.seed + rebuilds_;
    backend_ = std::make_unique<InsertBackend>(array_, backend_kind_, opts,
                                               cap_live_ + batch_threshold_);
    backend_->initialize(survivors);
}

std::vector<Key> DynamicLabeler::live_keys() const {
    std::vector<Key> internal = array_.collect(0, m_);
    std::vector<Key> out;
    out.reserve(internal.size());
    for (Key k : internal)
        if (!tombstones_.count(k)) out.push_back(k >> 1);
    return out;
}

void DynamicLabeler::check_invariants() const {
    if (live_ > cap_live_) throw corruption_error("live load above (1-delta)m");
    if (tombstones_.size() >= batch_threshold_)
        throw corruption_error("tombstone batch not flushed");
    backend_->check_invariants();
}

std::vector<std::size_t> select_visible(std::size_t initial_count, double delta,
                                        std::size_t n_prime) {
    std::size_t need = n_prime / 2;
    if (initial_count < need)
        throw std::invalid_argument("not enough initial items to pick visible set");
    auto spacing = static_cast<std::size_t>(std::ceil(3.0 / delta));
    if (spacing == 0) spacing = 1;
    std::vector<std::size_t> ranks;
    ranks.reserve(need);
    std::vector<bool> taken(initial_count + 1, false);
    for (std::size_t r = 1; r <= initial_count && ranks.size() < need; r += spacing) {
        ranks.push_back(r);
        taken[r] = true;
    }
    for (std::size_t r = 1; r <= initial_count && ranks.size() < need; ++r) {
        if (!taken[r]) {
            ranks.push_back(r);
            taken[r] = true;
        }
    }
    std::sort(ranks.begin(), ranks.end());
    return ranks;
}

bool IncrementSimulation::pattern_overflow(std::size_t initial_count,
                                           std::size_t empty_count,
                                           std::size_t m) {
    if (empty_count == 0) return true;
    std::size_t spacing = (3 * m + empty_count - 1) / empty_count;
    std::size_t need = empty_count / 3;
    if (need == 0) return true;
    std::size_t pattern = initial_count ? (initial_count - 1) / spacing + 1 : 0;
    return pattern > need;
}

IncrementSimulation::IncrementSimulation(LabeledArray& real,
                                         std::size_t empty_count,
                                         BackendKind backend,
                                         BackendOptions opts, bool check)
    : real_(real),
      m_(real.size()),
      empty_count_(empty_count),
      spacing_((3 * m_ + empty_count - 1) / empty_count),
      n_prime_(2 * (empty_count / 3)),
      mirror_capacity_(empty_count / 3),
      check_(check),
      virtual_array_(2 * (empty_count / 3) > 0 ? 4 * (empty_count / 3) : 1) {
    if (empty_count < 3) throw std::invalid_argument("too few empty slots");
    std::size_t initial = m_ - empty_count;
    if (initial < n_prime_ / 2)
        throw std::invalid_argument("not enough initial items");
    if (pattern_overflow(initial, empty_count, m_))
        throw std::invalid_argument("visible pattern does not fit; use fallback");
    backend_ = std::make_unique<InsertBackend>(virtual_array_, backend, opts,
                                               n_prime_);
}

void IncrementSimulation::start() {
    std::vector<Key> items = real_.collect(0, m_);
    std::size_t initial = items.size();
    std::vector<bool> visible(initial, false);
    std::size_t need = n_prime_ / 2, got = 0;
    for (std::size_t r = 0; r < initial && got < need; r += spacing_) {
        visible[r] = true;
        ++got;
    }
    for (std::size_t r = 0; r < initial && got < need; ++r) {
        if (!visible[r]) {
            visible[r] = true;
            ++got;
        }
    }
    if (got < need) throw corruption_error("visible selection fell short");

    backend_->initialize({});
    for (std::size_t r = 0; r < initial; ++r) {
        if (visible[r]) {
            backend_->insert(items[r]);
        } else {
            inv_sorted_.push_back(items[r]);
            invisible_.insert(items[r]);
        }
    }
    apply_layout(target_layout(), CostCategory::Rebuild);
    if (check_) check_invariants();
}

std::vector<Key> IncrementSimulation::target_layout() const {
    // A visible item is followed by the invisible keys between it and the
    // next visible one, then by as many free slots as the virtual array has
    // between the two; free virtual slots before the first item stay leading
    // free slots.
    std::vector<Key> target(m_, 0);
    std::size_t r = 0, p = 0;
    std::size_t vm = virtual_array_.size();
    std::size_t v = 0;
    while (v < vm && !virtual_array_.occupied(v)) {
        ++v;
        ++r;
    }
    while (v < vm) {
        target[r++] = virtual_array_.key_at(v);
        std::size_t next = v + 1;
        while (next < vm && !virtual_array_.occupied(next)) ++next;
        if (next < vm) {
            Key bound = virtual_array_.key_at(next);
            while (p < inv_sorted_.size() && inv_sorted_[p] < bound)
                target[r++] = inv_sorted_[p++];
        } else {
            while (p < inv_sorted_.size()) target[r++] = inv_sorted_[p++];
        }
        r += next - v - 1;  // one free real slot per free virtual slot
        v = next;
    }
    return target;
}

std::uint64_t IncrementSimulation::apply_layout(const std::vector<Key>& target,
                                                CostCategory cat) {
    for (std::size_t s = 0; s < m_; ++s) {
        if (real_.occupied(s) && real_.key_at(s) != target[s])
            real_.clear_slot(s);
    }
    std::uint64_t writes = 0;
    for (std::size_t s = 0; s < m_; ++s) {
        if (target[s] != 0 && !real_.occupied(s)) {
            real_.write_element(s, target[s], cat);
            ++writes;
        }
    }
    return writes;
}

std::uint64_t IncrementSimulation::insert(Key key) {
    if (key == 0) throw std::invalid_argument("simulation keys must be nonzero");
    if (mirror_capacity_ == 0)
        throw capacity_error("increment simulation exhausted");
    std::uint64_t vbefore = virtual_array_.ledger().total_moves();
    backend_->insert(key);
    std::uint64_t vmoves = virtual_array_.ledger().total_moves() - vbefore;
    std::uint64_t real_moves = apply_layout(target_layout(), CostCategory::Rebuild);
    --mirror_capacity_;
    if (real_moves > (spacing_ + 1) * std::max<std::uint64_t>(vmoves, 1))
        throw corruption_error("real/virtual move ratio exceeded ceil(3/delta)+1");
    if (check_) check_invariants();
    return real_moves;
}

void IncrementSimulation::check_invariants() const {
    // (1) and (3): invisible items sit in blocks of bounded size immediately
    // after an item, with no free slot on their left.
    std::size_t run = 0;
    bool prev_occupied = false;
    bool seen_any = false;
    for (std::size_t s = 0; s < m_; ++s) {
        if (!real_.occupied(s)) {
            prev_occupied = false;
            run = 0;
            continue;
        }
        Key k = real_.key_at(s);
        if (invisible_.count(k)) {
            if (!seen_any || !prev_occupied)
                throw corruption_error("free slot or array edge left of invisible item");
            ++run;
            if (run > block_bound())
                throw corruption_error("invisible block exceeds bound");
        } else {
            run = 0;
        }
        prev_occupied = true;
        seen_any = true;
    }
    // (2) stripping invisible items and their slots reproduces the virtual
    // array (up to the <=2 permanently free trailing slots).
    std::size_t v = 0;
    for (std::size_t s = 0; s < m_; ++s) {
        bool occ = real_.occupied(s);
        if (occ && invisible_.count(real_.key_at(s))) continue;
        if (v < virtual_array_.size()) {
            if (occ != virtual_array_.occupied(v))
                throw corruption_error("stripped real array differs from virtual");
            if (occ && real_.key_at(s) != virtual_array_.key_at(v))
                throw corruption_error("stripped real key differs from virtual");
        } else if (occ) {
            throw corruption_error("occupied slot beyond the virtual image");
        }
        ++v;
    }
}

FillResult fill_from_empty(LabeledArray& array, std::span<const Key> keys,
                           BackendKind backend, BackendOptions opts, bool check) {
    std::size_t m = array.size();
    if (keys.size() != m)
        throw std::invalid_argument("fill_from_empty needs exactly m keys");
    if (array.live_count() != 0)
        throw std::invalid_argument("fill_from_empty needs an empty array");
    FillResult result;
    std::uint64_t before = array.ledger().total_moves();

    std::size_t idx = 0;
    std::size_t half = m / 2;
    if (half > 0) {
        InsertBackend phase0(array, backend, opts, half);
        phase0.initialize({});
        while (idx < half) phase0.insert(keys[idx++]);
        ++result.phases;
        result.phase_inserts.push_back(half);
        if (check) phase0.check_invariants();
    }

    while (idx < m) {
        std::size_t live = idx;
        std::size_t e = m - live;
        if (e < 12 || IncrementSimulation::pattern_overflow(live, e, m)) {
            // Trivial regime: one respread per insert finishes the fill.
            std::size_t inserted = 0;
            while (idx < m) {
                respread_with_key(array, keys[idx++], CostCategory::Rebuild);
                ++inserted;
            }
            ++result.phases;
            result.phase_inserts.push_back(inserted);
            break;
        }
        std::size_t target = (e + 2) / 3;  // ceil(e/3)
        std::size_t mirrored = e / 3;
        BackendOptions phase_opts = opts;
        phase_opts.seed = opts.seed + result.phases + 1;
        IncrementSimulation sim(array, e, backend, phase_opts, check);
        sim.start();
        for (std::size_t j = 0; j < mirrored; ++j) sim.insert(keys[idx++]);
        for (std::size_t j = mirrored; j < target; ++j)
            respread_with_key(array, keys[idx++], CostCategory::Rebuild);
        ++result.phases;
        result.phase_inserts.push_back(target);
    }

    result.total_moves = array.ledger().total_moves() - before;
    return result;
}

}  // namespace ll
