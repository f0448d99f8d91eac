#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ll/bench.hpp"

using namespace ll;

namespace {

RunReport synthetic(const std::string& algo, std::size_t n, double mpo) {
    RunReport r;
    r.algo = algo;
    r.n = n;
    r.m = 2 * n;
    r.workload = "hammer";
    r.seed = 1;
    r.ops = n / 2;
    r.moves_per_op = mpo;
    r.total_moves = static_cast<std::uint64_t>(mpo * r.ops);
    return r;
}

std::string csv_string(const std::vector<RunReport>& reports) {
    std::ostringstream ss;
    emit_csv(reports, ss);
    return ss.str();
}

}  // namespace

TEST_CASE("empty report list emits only the header") {
    std::string csv = csv_string({});
    CHECK(csv == csv_header() + "\n");
}

TEST_CASE("three reports emit four lines in (algo, n, seed) order") {
    std::vector<RunReport> reports{synthetic("seesaw", 4096, 10.0),
                                   synthetic("classical", 4096, 5.0),
                                   synthetic("classical", 1024, 4.0)};
    std::string csv = csv_string(reports);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 4);
    CHECK(csv.find("classical,1024") < csv.find("classical,4096"));
    CHECK(csv.find("classical,4096") < csv.find("seesaw,4096"));
}

TEST_CASE("emitted CSV parses back to the same reports") {
    std::vector<RunReport> reports{synthetic("seesaw", 1024, 12.5),
                                   synthetic("classical", 1024, 3.25)};
    reports[0].rebuild_moves = 100;
    reports[0].expensive_leaf_arrival_fraction = 0.015625;
    auto path = (std::filesystem::temp_directory_path() / "ll_bench_rt.csv").string();
    emit_csv(reports, path);
    std::vector<RunReport> back = parse_csv(path);
    std::remove(path.c_str());
    REQUIRE(back.size() == 2);
    // Sorted order puts classical first.
    CHECK(back[0].algo == "classical");
    CHECK(back[1].algo == "seesaw");
    CHECK(back[1].rebuild_moves == 100);
    CHECK(back[1].moves_per_op == doctest::Approx(12.5));
    CHECK(back[1].expensive_leaf_arrival_fraction == doctest::Approx(0.015625));
}

TEST_CASE("fit_scaling recovers synthetic exponents") {
    SUBCASE("quadratic in log n") {
        std::vector<RunReport> reports;
        for (std::size_t logn : {std::size_t{8}, std::size_t{16}, std::size_t{32}}) {
            double lg = static_cast<double>(logn);
            reports.push_back(synthetic("classical", std::size_t{1} << logn, lg * lg));
        }
        ScalingFit fit = fit_scaling(reports);
        CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("linear in log n") {
        std::vector<RunReport> reports;
        for (std::size_t logn : {std::size_t{8}, std::size_t{16}, std::size_t{32}}) {
            double lg = static_cast<double>(logn);
            reports.push_back(synthetic("seesaw", std::size_t{1} << logn, lg));
        }
        ScalingFit fit = fit_scaling(reports);
        CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.01));
    }
    SUBCASE("constant series has unit ratios") {
        std::vector<RunReport> reports;
        for (std::size_t logn : {std::size_t{8}, std::size_t{10}, std::size_t{12}})
            reports.push_back(synthetic("x", std::size_t{1} << logn, 7.0));
        ScalingFit fit = fit_scaling(reports);
        REQUIRE(fit.doubling_ratios.size() == 2);
        CHECK(fit.doubling_ratios[0] == doctest::Approx(1.0));
        CHECK(fit.doubling_ratios[1] == doctest::Approx(1.0));
    }
    SUBCASE("fewer than three sizes is an error") {
        std::vector<RunReport> reports{synthetic("x", 256, 1.0),
                                       synthetic("x", 512, 2.0)};
        CHECK_THROWS_AS(fit_scaling(reports), std::invalid_argument);
    }
}

TEST_CASE("insert-only trials populate reports and repeat deterministically") {
    ExperimentConfig cfg;
    cfg.algos = {"seesaw"};
    cfg.mode = RunMode::InsertOnly;
    cfg.n_values = {1 << 10};
    cfg.workload.kind = WorkloadKind::Hammer;
    cfg.trials = 1;
    cfg.base_seed = 9;
    TrialResult a = run_trial(cfg, "seesaw", 1 << 10, 9);
    TrialResult b = run_trial(cfg, "seesaw", 1 << 10, 9);
    CHECK(a.report.ops == (1 << 10) / 2);
    CHECK(a.report.total_moves > 0);
    CHECK(a.report.total_moves == b.report.total_moves);
    CHECK(a.report.rebuild_moves == b.report.rebuild_moves);
    CHECK(a.report.reset_moves == b.report.reset_moves);
    CHECK(a.report.max_depth_observed == b.report.max_depth_observed);
    CHECK(a.report.m == (1 << 11));
}

TEST_CASE("both algorithms agree on the final key set") {
    std::size_t n = 1 << 10;
    std::size_t m = 2 * n;
    std::vector<Key> initial = initial_keys(m / 4);
    WorkloadSpec spec{WorkloadKind::Bursty, m / 4, 13};
    OpStream stream = generate(spec);

    LabeledArray a1(m);
    SeeSawConfig sc = SeeSawConfig::make(m, 64.0, 8.0, 13);
    SeeSawTree tree(a1, sc);
    tree.initialize(initial);
    for (const Op& op : stream) tree.insert(op.key);

    LabeledArray a2(m);
    a2.spread_evenly(0, m, initial, CostCategory::Rebuild);
    ClassicalLabeler lab(a2, 0, m);
    for (const Op& op : stream) lab.insert(op.key, CostCategory::LeafLocal);

    CHECK(tree.collect_set() == a2.collect(0, m));
}

TEST_CASE("run_experiment covers the (algo, n, seed) grid") {
    ExperimentConfig cfg;
    cfg.algos = {"classical", "seesaw"};
    cfg.mode = RunMode::InsertOnly;
    cfg.n_values = {1 << 8, 1 << 9};
    cfg.workload.kind = WorkloadKind::UniformRandom;
    cfg.trials = 2;
    cfg.base_seed = 4;
    std::vector<RunReport> reports = run_experiment(cfg);
    CHECK(reports.size() == 8);
    std::string csv1 = csv_string(reports);
    std::string csv2 = csv_string(run_experiment(cfg));
    // Strip the wall-time column before comparing.
    auto strip_wall = [](const std::string& csv) {
        std::string out;
        std::istringstream ss(csv);
        std::string line;
        while (std::getline(ss, line))
            out += line.substr(0, line.rfind(',')) + "\n";
        return out;
    };
    CHECK(strip_wall(csv1) == strip_wall(csv2));
}

TEST_CASE("n values must be powers of two") {
    ExperimentConfig cfg;
    cfg.algos = {"classical"};
    cfg.n_values = {1000};
    cfg.workload.kind = WorkloadKind::SeqAsc;
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
}

TEST_CASE("dynamic mode trials replay mixed streams") {
    ExperimentConfig cfg;
    cfg.mode = RunMode::Dynamic;
    cfg.workload.kind = WorkloadKind::Mixed;
    cfg.ops = 4000;
    cfg.delta = 0.25;
    TrialResult tr = run_trial(cfg, "seesaw", 1 << 12, 5);
    CHECK(tr.report.ops == 4000);
    CHECK(tr.report.total_moves > 0);
    CHECK(tr.report.n == static_cast<std::size_t>((1 << 12) * 0.75));
}

TEST_CASE("fillup mode trials fill to a full array") {
    ExperimentConfig cfg;
    cfg.mode = RunMode::Fillup;
    cfg.workload.kind = WorkloadKind::UniformRandom;
    TrialResult tr = run_trial(cfg, "classical", 1 << 10, 2);
    CHECK(tr.report.ops == (1 << 10));
    double bound = std::ceil(std::log(1024.0) / std::log(1.5)) + 1;
    CHECK(static_cast<double>(tr.report.max_depth_observed) <= bound);
}
