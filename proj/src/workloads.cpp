#include "ll/workloads.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <random>
#include <unordered_set>

namespace ll {

namespace {

Key odd_key(std::mt19937_64& rng) {
    return ((rng() >> 2) % (kKeySpace / 2)) * 2 + 1;
}

OpStream gen_uniform(const WorkloadSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::unordered_set<Key> used;
    OpStream out;
    out.reserve(spec.count);
    while (out.size() < spec.count) {
        Key k = odd_key(rng);
        if (used.insert(k).second) out.push_back({true, k});
    }
    return out;
}

OpStream gen_seq(const WorkloadSpec& spec, bool ascending) {
    if (spec.count >= kKeySpace) throw std::invalid_argument("count exceeds key space");
    OpStream out;
    out.reserve(spec.count);
    for (std::uint64_t i = 0; i < spec.count; ++i) {
        Key k = ascending ? i + 1 : spec.count - i;
        out.push_back({true, k});
    }
    return out;
}

OpStream gen_hammer(const WorkloadSpec& spec) {
    if (spec.anchor_fraction <= 0.0 || spec.anchor_fraction >= 1.0)
        throw std::invalid_argument("anchor_fraction must be in (0,1)");
    Key anchor = static_cast<Key>(spec.anchor_fraction *
                                  static_cast<double>(kKeySpace)) | 1;
    if (spec.count >= (kKeySpace - anchor) / 2)
        throw std::invalid_argument("hammer gap exhausted; restart with a wider space");
    OpStream out;
    out.reserve(spec.count);
    for (std::uint64_t i = 1; i <= spec.count; ++i)
        out.push_back({true, anchor + 2 * i});
    return out;
}

OpStream gen_bursty(const WorkloadSpec& spec) {
    std::size_t clusters = spec.cluster_count ? spec.cluster_count : 1;
    std::mt19937_64 rng(spec.seed);
    Key band = kKeySpace / clusters;
    if (spec.count / clusters + 1 >= band / 8)
        throw std::invalid_argument("bursty clusters exceed key space");
    std::vector<Key> anchor(clusters);
    for (std::size_t c = 0; c < clusters; ++c)
        anchor[c] = band * c + band / 2 + (rng() % (band / 8)) * 2 + 1;
    std::vector<std::uint64_t> step(clusters, 0);
    OpStream out;
    out.reserve(spec.count);
    for (std::uint64_t i = 0; i < spec.count; ++i) {
        std::size_t c = i % clusters;
        out.push_back({true, anchor[c] + 2 * (++step[c])});
    }
    return out;
}

OpStream gen_mixed(const WorkloadSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::unordered_set<Key> used;
    std::vector<Key> live;
    OpStream out;
    out.reserve(spec.count);
    while (out.size() < spec.count) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (!live.empty() && u < spec.delete_fraction) {
            std::size_t i = rng() % live.size();
            out.push_back({false, live[i]});
            live[i] = live.back();
            live.pop_back();
        } else {
            Key k = odd_key(rng);
            if (!used.insert(k).second) continue;
            live.push_back(k);
            out.push_back({true, k});
        }
    }
    return out;
}

}  // namespace

OpStream generate(const WorkloadSpec& spec) {
    switch (spec.kind) {
        case WorkloadKind::SeqAsc: return gen_seq(spec, true);
        case WorkloadKind::SeqDesc: return gen_seq(spec, false);
        case WorkloadKind::UniformRandom: return gen_uniform(spec);
        case WorkloadKind::Hammer: return gen_hammer(spec);
        case WorkloadKind::Bursty: return gen_bursty(spec);
        case WorkloadKind::Mixed: return gen_mixed(spec);
    }
    throw std::invalid_argument("unknown workload kind");
}

std::vector<Key> initial_keys(std::size_t count) {
    std::vector<Key> out;
    out.reserve(count);
    Key gap = (kKeySpace / 2 / (count + 1)) * 2;
    if (gap < 2) throw std::invalid_argument("too many initial keys");
    for (std::size_t i = 0; i < count; ++i) out.push_back(gap * (i + 1));
    return out;
}

void write_stream(const OpStream& stream, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (const Op& op : stream)
        f << (op.is_insert ? 'I' : 'D') << ' ' << op.key << '\n';
}

OpStream read_stream(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw stream_parse_error("cannot read " + path);
    OpStream out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        char tag = 0;
        std::uint64_t key = 0;
        char trail = 0;
        int got = std::sscanf(line.c_str(), " %c %" SCNu64 " %c", &tag, &key, &trail);
        if (got != 2 || (tag != 'I' && tag != 'D'))
            throw stream_parse_error("parse error at line " + std::to_string(lineno) +
                                     ": '" + line + "'");
        out.push_back({tag == 'I', key});
    }
    return out;
}

void validate_stream(const OpStream& stream, std::size_t max_live) {
    std::unordered_set<Key> live;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const Op& op = stream[i];
        if (op.is_insert) {
            if (!live.insert(op.key).second)
                throw std::invalid_argument("duplicate insert at op " + std::to_string(i));
            if (max_live && live.size() > max_live)
                throw std::invalid_argument("prefix load exceeds max at op " + std::to_string(i));
        } else if (live.erase(op.key) == 0) {
            throw std::invalid_argument("delete of absent key at op " + std::to_string(i));
        }
    }
}

WorkloadKind parse_workload_kind(const std::string& name) {
    if (name == "seq_asc") return WorkloadKind::SeqAsc;
    if (name == "seq_desc") return WorkloadKind::SeqDesc;
    if (name == "uniform_random") return WorkloadKind::UniformRandom;
    if (name == "hammer") return WorkloadKind::Hammer;
    if (name == "bursty") return WorkloadKind::Bursty;
    if (name == "mixed") return WorkloadKind::Mixed;
    throw std::invalid_argument("unknown workload kind: " + name);
}

std::string workload_kind_name(WorkloadKind kind) {
    switch (kind) {
        case WorkloadKind::SeqAsc: return "seq_asc";
        case WorkloadKind::SeqDesc: return "seq_desc";
        case WorkloadKind::UniformRandom: return "uniform_random";
        case WorkloadKind::Hammer: return "hammer";
        case WorkloadKind::Bursty: return "bursty";
        case WorkloadKind::Mixed: return "mixed";
    }
    return "?";
}

}  // namespace ll
