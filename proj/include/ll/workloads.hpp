#pragma once
// Seeded generators of oblivious operation streams, and the one-op-per-line
// replay file format ("I <u64>" / "D <u64>").
//
// Keys live in a 63-bit space. Generators other than the sequential ones emit
// odd keys only; the initial fill used by insert-only runs takes even keys,
// so streams never collide with it.

#include <cstdint>
#include <string>
#include <vector>

#include "ll/core_array.hpp"

namespace ll {

inline constexpr Key kKeySpace = Key{1} << 63;

struct stream_parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class WorkloadKind {
    SeqAsc,
    SeqDesc,
    UniformRandom,
    Hammer,
    Bursty,
    Mixed,
};

struct WorkloadSpec {
    WorkloadKind kind = WorkloadKind::UniformRandom;
    std::uint64_t count = 0;
    std::uint64_t seed = 1;
    double anchor_fraction = 0.5;  // hammer
    std::size_t cluster_count = 8; // bursty
    double delete_fraction = 0.45; // mixed
};

struct Op {
    bool is_insert = true;
    Key key = 0;
    bool operator==(const Op&) const = default;
};

using OpStream = std::vector<Op>;

// Deterministic in the spec alone. Hammer emits an ascending unit-step run
// just above the anchor point, so every insert lands between the previous
// hammer key and the anchor's successor.
OpStream generate(const WorkloadSpec& spec);

// Evenly spaced even keys for pre-filling a structure; hammer wedges fit in
// the gaps between consecutive ones.
std::vector<Key> initial_keys(std::size_t count);

void write_stream(const OpStream& stream, const std::string& path);
OpStream read_stream(const std::string& path);

// Throws if the stream inserts a duplicate live key, deletes an absent key,
// or holds more than max_live keys at any prefix (0 = unlimited).
void validate_stream(const OpStream& stream, std::size_t max_live = 0);

WorkloadKind parse_workload_kind(const std::string& name);
std::string workload_kind_name(WorkloadKind kind);

}  // namespace ll
