#pragma once
// Experiment driver: builds structures, replays workloads, sweeps size
// matrices concurrently, and emits CSV rows plus doubling-ratio fits.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ll/metrics.hpp"
#include "ll/reductions.hpp"
#include "ll/workloads.hpp"

namespace ll {

enum class RunMode { InsertOnly, Dynamic, Fillup };

RunMode parse_run_mode(const std::string& name);
std::string run_mode_name(RunMode mode);
BackendKind parse_backend(const std::string& name);

struct ExperimentConfig {
    std::vector<std::string> algos{"seesaw"};
    RunMode mode = RunMode::InsertOnly;
    std::vector<std::size_t> n_values;  // powers of two
    WorkloadSpec workload;              // count is derived per run
    std::optional<std::string> workload_file;
    std::size_t trials = 1;
    std::uint64_t base_seed = 1;
    std::uint64_t ops = 0;  // dynamic mode stream length
    double c_alpha = 16.0;
    double c_beta = 2.0;
    bool pma = false;
    double delta = 0.25;
    bool record_skews = false;
    int check = -1;  // -1 auto (on below n = 2^16), 0 off, 1 on
    std::size_t max_threads = 0;  // 0 = hardware
};

struct TrialResult {
    RunReport report;
    SkewHistory history;
};

// One structure, one replayed stream. In insert-only mode the structure is
// pre-seeded with m/4 = n/2 evenly spread elements and the stream holds m/4
// inserts; setup cost is excluded from the meter.
TrialResult run_trial(const ExperimentConfig& cfg, const std::string& algo,
                      std::size_t n_value, std::uint64_t seed);

// One report per (algo, n, seed), in that order. Trials run concurrently.
std::vector<RunReport> run_experiment(const ExperimentConfig& cfg);
std::vector<TrialResult> run_experiment_full(const ExperimentConfig& cfg);

std::string csv_header();
void emit_csv(const std::vector<RunReport>& reports, std::ostream& out);
void emit_csv(const std::vector<RunReport>& reports, const std::string& path);
std::vector<RunReport> parse_csv(const std::string& path);

struct ScalingFit {
    std::vector<double> doubling_ratios;  // mpo(2n)/mpo(n), ascending n
    double exponent = 0.0;                // least-squares e in mpo ~ (log2 n)^e
};

// Seed-averaged over reports of a single algo; needs >= 3 distinct n.
ScalingFit fit_scaling(const std::vector<RunReport>& reports);

bool check_enabled(const ExperimentConfig& cfg, std::size_t n_value);

}  // namespace ll
