#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ll/workloads.hpp"

using namespace ll;

namespace {

struct TempFile {
    std::string path;
    TempFile() {
        path = (std::filesystem::temp_directory_path() /
                ("ll_stream_" + std::to_string(counter++)))
                   .string();
    }
    ~TempFile() { std::remove(path.c_str()); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("seq_asc emits 1..count") {
    OpStream s = generate({WorkloadKind::SeqAsc, 4, 1});
    OpStream expect{{true, 1}, {true, 2}, {true, 3}, {true, 4}};
    CHECK(s == expect);
}

TEST_CASE("seq_desc emits count..1") {
    OpStream s = generate({WorkloadKind::SeqDesc, 3, 1});
    OpStream expect{{true, 3}, {true, 2}, {true, 1}};
    CHECK(s == expect);
}

TEST_CASE("hammer keys nest strictly inside one initial gap") {
    WorkloadSpec spec{WorkloadKind::Hammer, 3, 1};
    spec.anchor_fraction = 0.5;
    OpStream s = generate(spec);
    REQUIRE(s.size() == 3);

    std::vector<Key> init = initial_keys(1024);
    // Locate the bracketing initial keys around the first hammer key.
    Key below = 0, above = kKeySpace;
    for (Key k : init) {
        if (k < s[0].key) below = std::max(below, k);
        if (k > s[0].key) above = std::min(above, k);
    }
    Key prev = below;
    for (const Op& op : s) {
        CHECK(op.key > prev);   // strictly after the previous hammer key
        CHECK(op.key < above);  // strictly before the anchor's successor
        prev = op.key;
    }
}

TEST_CASE("identical specs generate identical streams") {
    for (WorkloadKind kind : {WorkloadKind::UniformRandom, WorkloadKind::Hammer,
                              WorkloadKind::Bursty, WorkloadKind::Mixed}) {
        WorkloadSpec spec{kind, 500, 77};
        CHECK(generate(spec) == generate(spec));
    }
}

TEST_CASE("generated streams pass the validity linter") {
    for (WorkloadKind kind : {WorkloadKind::SeqAsc, WorkloadKind::SeqDesc,
                              WorkloadKind::UniformRandom, WorkloadKind::Hammer,
                              WorkloadKind::Bursty, WorkloadKind::Mixed}) {
        WorkloadSpec spec{kind, 2000, 3};
        validate_stream(generate(spec));
    }
}

TEST_CASE("linter rejects invalid streams") {
    CHECK_THROWS_AS(validate_stream({{true, 5}, {true, 5}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_stream({{true, 5}, {false, 6}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_stream({{true, 5}, {true, 6}}, 1), std::invalid_argument);
    validate_stream({{true, 5}, {false, 5}, {true, 5}});
}

TEST_CASE("streams round-trip through the file format") {
    TempFile tmp;
    SUBCASE("insert and delete ops") {
        OpStream s{{true, 5}, {false, 5}};
        write_stream(s, tmp.path);
        CHECK(read_stream(tmp.path) == s);
    }
    SUBCASE("empty stream round-trips to an empty file") {
        write_stream({}, tmp.path);
        std::ifstream f(tmp.path);
        std::string all((std::istreambuf_iterator<char>(f)),
                        std::istreambuf_iterator<char>());
        CHECK(all.empty());
        CHECK(read_stream(tmp.path).empty());
    }
    SUBCASE("byte-identical rewrite") {
        WorkloadSpec spec{WorkloadKind::Mixed, 300, 9};
        OpStream s = generate(spec);
        write_stream(s, tmp.path);
        OpStream back = read_stream(tmp.path);
        CHECK(back == s);
        TempFile tmp2;
        write_stream(back, tmp2.path);
        std::ifstream f1(tmp.path, std::ios::binary), f2(tmp2.path, std::ios::binary);
        std::string b1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
        std::string b2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
        CHECK(b1 == b2);
    }
}

TEST_CASE("malformed lines report their line number") {
    TempFile tmp;
    {
        std::ofstream f(tmp.path);
        f << "X 3\n";
    }
    try {
        read_stream(tmp.path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
    {
        std::ofstream f(tmp.path);
        f << "I 5\nD 5\nI notakey\n";
    }
    try {
        read_stream(tmp.path);
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("mixed streams stay near the configured delete share") {
    WorkloadSpec spec{WorkloadKind::Mixed, 20000, 5};
    spec.delete_fraction = 0.45;
    OpStream s = generate(spec);
    std::size_t deletes = 0;
    for (const Op& op : s) deletes += !op.is_insert;
    double share = static_cast<double>(deletes) / s.size();
    CHECK(share > 0.40);
    CHECK(share < 0.50);
}

TEST_CASE("initial keys are evenly spaced and even") {
    std::vector<Key> init = initial_keys(100);
    REQUIRE(init.size() == 100);
    Key gap = init[0];
    for (std::size_t i = 0; i < init.size(); ++i) {
        CHECK(init[i] == gap * (i + 1));
        CHECK(init[i] % 2 == 0);
    }
}

TEST_CASE("workload kind names round-trip") {
    for (WorkloadKind kind : {WorkloadKind::SeqAsc, WorkloadKind::SeqDesc,
                              WorkloadKind::UniformRandom, WorkloadKind::Hammer,
                              WorkloadKind::Bursty, WorkloadKind::Mixed})
        CHECK(parse_workload_kind(workload_kind_name(kind)) == kind);
    CHECK_THROWS_AS(parse_workload_kind("nope"), std::invalid_argument);
}
