#include "ll/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace ll {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string workload_label(const ExperimentConfig& cfg) {
    return cfg.workload_file ? "file" : workload_kind_name(cfg.workload.kind);
}

OpStream stream_for(const ExperimentConfig& cfg, std::uint64_t count,
                    std::uint64_t seed) {
    if (cfg.workload_file) return read_stream(*cfg.workload_file);
    WorkloadSpec spec = cfg.workload;
    spec.count = count;
    spec.seed = seed;
    return generate(spec);
}

void require_insert_only(const OpStream& stream) {
    for (const Op& op : stream)
        if (!op.is_insert)
            throw std::invalid_argument("this mode takes insert-only streams");
}

// Streams use odd keys, the initial fill even multiples of one stride; a
// colliding replay would corrupt silently with checks off, so refuse it.
void require_disjoint_from_initial(const OpStream& stream, std::size_t n0) {
    Key gap = (kKeySpace / 2 / (n0 + 1)) * 2;
    for (const Op& op : stream) {
        if (op.key % gap == 0 && op.key / gap >= 1 && op.key / gap <= n0)
            throw std::invalid_argument("stream key collides with the initial fill");
    }
}

TrialResult run_insert_only(const ExperimentConfig& cfg, const std::string& algo,
                            std::size_t n, std::uint64_t seed) {
    std::size_t m = 2 * n;
    OpStream stream = stream_for(cfg, m / 4, seed);
    require_insert_only(stream);
    require_disjoint_from_initial(stream, m / 4);

    LabeledArray array(m);
    std::vector<Key> initial = initial_keys(m / 4);
    bool check = check_enabled(cfg, n);
    array.set_order_checks(check);

    TrialResult out;
    std::unique_ptr<SeeSawTree> tree;
    std::unique_ptr<ClassicalLabeler> labeler;
    if (algo == "seesaw") {
        SeeSawConfig sc = SeeSawConfig::make(m, cfg.c_alpha, cfg.c_beta, seed, cfg.pma);
        sc.record_skews = cfg.record_skews;
        tree = std::make_unique<SeeSawTree>(array, sc);
        tree->initialize(initial);
    } else if (algo == "classical") {
        array.spread_evenly(0, m, initial, CostCategory::Rebuild);
        labeler = std::make_unique<ClassicalLabeler>(array, 0, m);
    } else {
        throw std::invalid_argument("unknown algo: " + algo);
    }
    array.ledger().reset();

    std::size_t max_depth = 0;
    auto t0 = Clock::now();
    for (const Op& op : stream) {
        if (tree) {
            InsertOutcome o = tree->insert(op.key);
            max_depth = std::max(max_depth, o.depth);
        } else {
            labeler->insert(op.key, CostCategory::LeafLocal);
            array.ledger().total_inserts += 1;
            max_depth = std::max<std::size_t>(max_depth, 1);
        }
        if (check) {
            if (tree) tree->check_invariants();
            else array.verify_sorted();
        }
    }
    double wall = ms_since(t0);

    RunMeta meta{algo, n, m, workload_label(cfg),
                 seed, stream.size(), max_depth, wall};
    out.report = summarize(array.ledger(), meta);
    if (tree && cfg.record_skews) out.history = tree->take_history();
    return out;
}

TrialResult run_dynamic(const ExperimentConfig& cfg, const std::string& algo,
                        std::size_t m, std::uint64_t seed) {
    std::uint64_t count = cfg.ops ? cfg.ops : m;
    OpStream stream = stream_for(cfg, count, seed);
    BackendOptions opts;
    opts.c_alpha = cfg.c_alpha;
    opts.c_beta = cfg.c_beta;
    opts.seed = seed;
    opts.pma_mode = cfg.pma;
    opts.record_skews = false;
    DynamicLabeler dl(m, cfg.delta, parse_backend(algo), opts);
    validate_stream(stream, dl.max_live());
    bool check = check_enabled(cfg, m / 2);
    dl.array().set_order_checks(check);

    auto t0 = Clock::now();
    for (const Op& op : stream) {
        if (op.is_insert) dl.insert(op.key);
        else dl.erase(op.key);
        if (check) dl.check_invariants();
    }
    double wall = ms_since(t0);

    TrialResult out;
    RunMeta meta{algo, dl.max_live(), m, workload_label(cfg),
                 seed, stream.size(), 0, wall};
    out.report = summarize(dl.ledger(), meta);
    return out;
}

TrialResult run_fillup(const ExperimentConfig& cfg, const std::string& algo,
                       std::size_t m, std::uint64_t seed) {
    OpStream stream = stream_for(cfg, m, seed);
    require_insert_only(stream);
    std::vector<Key> keys;
    keys.reserve(stream.size());
    for (const Op& op : stream) keys.push_back(op.key);

    LabeledArray array(m);
    bool check = check_enabled(cfg, m);
    array.set_order_checks(check);
    BackendOptions opts;
    opts.c_alpha = cfg.c_alpha;
    opts.c_beta = cfg.c_beta;
    opts.seed = seed;
    opts.pma_mode = cfg.pma;

    auto t0 = Clock::now();
    FillResult fill = fill_from_empty(array, keys, parse_backend(algo), opts, check);
    double wall = ms_since(t0);
    array.ledger().total_inserts = keys.size();

    TrialResult out;
    // The depth column carries the phase count in fillup mode.
    RunMeta meta{algo, m, m, workload_label(cfg),
                 seed, keys.size(), fill.phases, wall};
    out.report = summarize(array.ledger(), meta);
    return out;
}

}  // namespace

RunMode parse_run_mode(const std::string& name) {
    if (name == "insert_only") return RunMode::InsertOnly;
    if (name == "dynamic") return RunMode::Dynamic;
    if (name == "fillup") return RunMode::Fillup;
    throw std::invalid_argument("unknown mode: " + name);
}

std::string run_mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::InsertOnly: return "insert_only";
        case RunMode::Dynamic: return "dynamic";
        case RunMode::Fillup: return "fillup";
    }
    return "?";
}

BackendKind parse_backend(const std::string& name) {
    if (name == "seesaw") return BackendKind::SeeSaw;
    if (name == "classical") return BackendKind::Classical;
    throw std::invalid_argument("unknown algo: " + name);
}

bool check_enabled(const ExperimentConfig& cfg, std::size_t n_value) {
    if (cfg.check >= 0) return cfg.check != 0;
    return n_value < (std::size_t{1} << 16);
}

TrialResult run_trial(const ExperimentConfig& cfg, const std::string& algo,
                      std::size_t n_value, std::uint64_t seed) {
    switch (cfg.mode) {
        case RunMode::InsertOnly: return run_insert_only(cfg, algo, n_value, seed);
        case RunMode::Dynamic: return run_dynamic(cfg, algo, n_value, seed);
        case RunMode::Fillup: return run_fillup(cfg, algo, n_value, seed);
    }
    throw std::invalid_argument("bad mode");
}

std::vector<TrialResult> run_experiment_full(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (std::size_t n : cfg.n_values)
        if (n == 0 || (n & (n - 1)) != 0)
            throw std::invalid_argument("n values must be powers of two");

    struct Task {
        std::string algo;
        std::size_t n;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const std::string& algo : cfg.algos)
        for (std::size_t n : cfg.n_values)
            for (std::size_t t = 0; t < cfg.trials; ++t)
                tasks.push_back({algo, n, cfg.base_seed + t});

    std::vector<TrialResult> results(tasks.size());
    std::size_t threads = cfg.max_threads ? cfg.max_threads
                                          : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = std::min(threads, tasks.size());

    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    std::mutex error_mutex;
    std::exception_ptr error;
    for (std::size_t w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    results[i] = run_trial(cfg, tasks[i].algo, tasks[i].n,
                                           tasks[i].seed);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        }));
    }
    for (auto& f : workers) f.get();
    if (error) std::rethrow_exception(error);
    return results;
}

std::vector<RunReport> run_experiment(const ExperimentConfig& cfg) {
    std::vector<TrialResult> full = run_experiment_full(cfg);
    std::vector<RunReport> reports;
    reports.reserve(full.size());
    for (auto& tr : full) reports.push_back(std::move(tr.report));
    return reports;
}

std::string csv_header() {
    return "algo,n,m,workload,seed,ops,total_moves,moves_per_op,rebuild_moves,"
           "reset_moves,leaf_moves,expensive_leaf_moves,exp_leaf_frac,max_depth,"
           "wall_ms";
}

void emit_csv(const std::vector<RunReport>& reports, std::ostream& out) {
    std::vector<const RunReport*> sorted;
    sorted.reserve(reports.size());
    for (const auto& r : reports) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const RunReport* a, const RunReport* b) {
                         return std::tie(a->algo, a->n, a->seed) <
                                std::tie(b->algo, b->n, b->seed);
                     });
    out << csv_header() << '\n';
    char buf[128];
    for (const RunReport* r : sorted) {
        out << r->algo << ',' << r->n << ',' << r->m << ',' << r->workload << ','
            << r->seed << ',' << r->ops << ',' << r->total_moves << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r->moves_per_op);
        out << buf << ',' << r->rebuild_moves << ',' << r->reset_moves << ','
            << r->leaf_moves << ',' << r->expensive_leaf_moves << ',';
        std::snprintf(buf, sizeof buf, "%.8f", r->expensive_leaf_arrival_fraction);
        out << buf << ',' << r->max_depth_observed << ',';
        std::snprintf(buf, sizeof buf, "%.3f", r->wall_ms);
        out << buf << '\n';
    }
}

void emit_csv(const std::vector<RunReport>& reports, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    emit_csv(reports, f);
}

std::vector<RunReport> parse_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(f, line) || line != csv_header())
        throw std::runtime_error("bad CSV header in " + path);
    std::vector<RunReport> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 15)
            throw std::runtime_error("bad CSV row: " + line);
        RunReport r;
        r.algo = fields[0];
        r.n = std::stoull(fields[1]);
        r.m = std::stoull(fields[2]);
        r.workload = fields[3];
        r.seed = std::stoull(fields[4]);
        r.ops = std::stoull(fields[5]);
        r.total_moves = std::stoull(fields[6]);
        r.moves_per_op = std::stod(fields[7]);
        r.rebuild_moves = std::stoull(fields[8]);
        r.reset_moves = std::stoull(fields[9]);
        r.leaf_moves = std::stoull(fields[10]);
        r.expensive_leaf_moves = std::stoull(fields[11]);
        r.expensive_leaf_arrival_fraction = std::stod(fields[12]);
        r.max_depth_observed = std::stoull(fields[13]);
        r.wall_ms = std::stod(fields[14]);
        out.push_back(std::move(r));
    }
    return out;
}

ScalingFit fit_scaling(const std::vector<RunReport>& reports) {
    std::map<std::size_t, std::pair<double, std::size_t>> by_n;
    for (const RunReport& r : reports) {
        auto& acc = by_n[r.n];
        acc.first += r.moves_per_op;
        acc.second += 1;
    }
    if (by_n.size() < 3)
        throw std::invalid_argument("fit_scaling needs at least 3 sizes");
    std::vector<std::pair<std::size_t, double>> means;
    for (auto& [n, acc] : by_n) means.push_back({n, acc.first / acc.second});

    ScalingFit fit;
    for (std::size_t i = 1; i < means.size(); ++i)
        fit.doubling_ratios.push_back(means[i].second / means[i - 1].second);

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [n, mpo] : means) {
        double x = std::log(std::log2(static_cast<double>(n)));
        double y = std::log(mpo);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double k = static_cast<double>(means.size());
    fit.exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return fit;
}

}  // namespace ll
