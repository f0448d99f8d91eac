// Benchmark driver. Exit codes: 0 ok, 1 invariant failure, 2 usage error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ll/bench.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"list-labeling benchmark: see-saw vs classical"};

    std::string algo_list = "seesaw";
    std::string mode_name = "insert_only";
    std::string n_list;
    std::string workload_name = "hammer";
    std::string workload_file;
    std::string csv_path;
    ll::ExperimentConfig cfg;
    double anchor_fraction = 0.5;
    std::size_t clusters = 8;
    double delete_fraction = 0.45;
    int check_flag = -1;

    app.add_option("--algo", algo_list, "comma list: seesaw,classical");
    app.add_option("--mode", mode_name, "insert_only | dynamic | fillup");
    app.add_option("--n", n_list, "comma list of sizes (powers of two)")->required();
    app.add_option("--workload", workload_name,
                   "seq_asc|seq_desc|uniform_random|hammer|bursty|mixed");
    app.add_option("--workload-file", workload_file, "replay an op file instead");
    app.add_option("--ops", cfg.ops, "stream length (dynamic mode)");
    app.add_option("--trials", cfg.trials, "seeds per (algo,n)");
    app.add_option("--seed", cfg.base_seed, "base seed");
    app.add_option("--csv", csv_path, "write CSV here");
    app.add_option("--c-alpha", cfg.c_alpha, "see-saw quota constant");
    app.add_option("--c-beta", cfg.c_beta, "see-saw skew constant");
    app.add_flag("--pma", cfg.pma, "packed-memory-array mode");
    app.add_option("--delta", cfg.delta, "density slack (dynamic mode)");
    app.add_flag("--record-skews", cfg.record_skews, "record window skews");
    app.add_option("--check", check_flag, "invariant checks: 0|1 (default: on below n=2^16)");
    app.add_option("--anchor-fraction", anchor_fraction, "hammer anchor");
    app.add_option("--clusters", clusters, "bursty cluster count");
    app.add_option("--delete-fraction", delete_fraction, "mixed delete share");
    app.add_option("--threads", cfg.max_threads, "max concurrent trials");

    try {
        app.parse(argc, argv);
        cfg.algos = split_list(algo_list);
        cfg.mode = ll::parse_run_mode(mode_name);
        for (const std::string& tok : split_list(n_list))
            cfg.n_values.push_back(std::stoull(tok));
        cfg.workload.kind = ll::parse_workload_kind(workload_name);
        cfg.workload.anchor_fraction = anchor_fraction;
        cfg.workload.cluster_count = clusters;
        cfg.workload.delete_fraction = delete_fraction;
        if (!workload_file.empty()) cfg.workload_file = workload_file;
        cfg.check = check_flag;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::vector<ll::TrialResult> results = ll::run_experiment_full(cfg);
        std::vector<ll::RunReport> reports;
        for (auto& tr : results) reports.push_back(tr.report);
        ll::emit_csv(reports, std::cout);
        if (!csv_path.empty()) ll::emit_csv(reports, csv_path);

        if (cfg.record_skews) {
            std::size_t records = 0, verified = 0;
            for (const auto& tr : results) {
                records += tr.history.records.size();
                verified += ll::verify_history(tr.history, 1, true);
            }
            std::cerr << "telescoping identity: " << verified << "/" << records
                      << " recorded subproblems exact\n";
        }
        if (cfg.mode == ll::RunMode::InsertOnly && cfg.n_values.size() >= 3) {
            for (const std::string& algo : cfg.algos) {
                std::vector<ll::RunReport> mine;
                for (const auto& r : reports)
                    if (r.algo == algo) mine.push_back(r);
                ll::ScalingFit fit = ll::fit_scaling(mine);
                std::cerr << algo << " exponent vs log n: " << fit.exponent
                          << "; doubling ratios:";
                for (double r : fit.doubling_ratios) std::cerr << ' ' << r;
                std::cerr << "\n";
            }
        }
        return 0;
    } catch (const ll::corruption_error& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 1;
    } catch (const ll::stream_parse_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
