#pragma once

// Experiment harness: timed repeated solver runs over instance files, CSV
// result and summary tables, and the relative-deviation-index / relative-
// error aggregations used to compare configurations.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ops/bench_csv.hpp"
#include "ops/instance_io.hpp"
#include "ops/metaheuristics.hpp"

namespace ops {

struct ExperimentSpec {
    std::vector<std::string> instance_paths;
    std::vector<Method> methods;
    int repetitions = 1;
    Budget budget;
    std::uint64_t base_seed = 1;
    int threads = 0;  // 0: hardware concurrency; env OPS_THREADS overrides
    SolverParams params;
};

struct SummaryRow {
    std::string instance;
    std::string method;
    int runs = 0;
    Time best = 0;
    double average = 0.0;
};

struct ExperimentResults {
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summaries;
};

inline int resolve_thread_count(int flag_value) {
    if (const char* env = std::getenv("OPS_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    if (flag_value >= 1) return flag_value;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// One row per (instance, method, run); run seeds derive from the base seed
/// by stream index, so results are independent of worker scheduling.
inline ExperimentResults run_experiments(const ExperimentSpec& spec) {
    if (spec.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (spec.methods.empty()) throw std::invalid_argument("at least one method required");

    struct Task {
        std::size_t instance_idx, method_idx;
        int run;
        std::uint64_t stream;
    };
    std::vector<Instance> instances;
    std::vector<std::string> names;
    for (const auto& path : spec.instance_paths) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read instance file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        instances.push_back(parse_instance(buf.str()));
        // Identify rows by file stem.
        std::string name = path;
        if (const auto slash = name.find_last_of("/\\"); slash != std::string::npos)
            name = name.substr(slash + 1);
        if (const auto dot = name.rfind('.'); dot != std::string::npos) name = name.substr(0, dot);
        names.push_back(name);
    }

    std::vector<Task> tasks;
    std::uint64_t stream = 0;
    for (std::size_t ii = 0; ii < instances.size(); ++ii)
        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
            for (int run = 0; run < spec.repetitions; ++run)
                tasks.push_back({ii, mi, run, stream++});

    std::vector<ResultRow> rows(tasks.size());
    std::mutex cursor_mutex;
    std::size_t cursor = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t t;
            {
                std::lock_guard<std::mutex> lock(cursor_mutex);
                if (cursor >= tasks.size()) return;
                t = cursor++;
            }
            const Task& task = tasks[t];
            RngStream rng(spec.base_seed, task.stream);
            SolverParams params = spec.params;
            params.method = spec.methods[task.method_idx];
            const auto wall_start = std::chrono::steady_clock::now();
            const SolverResult result =
                run_method(instances[task.instance_idx], params, spec.budget, rng);
            // Under an iteration budget the output must be byte-reproducible,
            // so wall time is not reported there.
            const double seconds =
                spec.budget.iterations
                    ? 0.0
                    : std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
                          .count();
            rows[t] = {names[task.instance_idx], method_name(params.method), task.run,
                       rng.initial_state(), result.schedule.makespan, seconds, result.units};
        }
    };

    const int pool = resolve_thread_count(spec.threads);
    std::vector<std::thread> threads;
    for (int i = 1; i < pool; ++i) threads.emplace_back(worker);
    worker();
    for (auto& th : threads) th.join();

    ExperimentResults out;
    out.rows = std::move(rows);
    std::sort(out.rows.begin(), out.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.instance, a.method, a.run) < std::tie(b.instance, b.method, b.run);
    });

    std::map<std::pair<std::string, std::string>, std::vector<Time>> groups;
    for (const auto& row : out.rows) groups[{row.instance, row.method}].push_back(row.makespan);
    for (const auto& [key, values] : groups) {
        SummaryRow s;
        s.instance = key.first;
        s.method = key.second;
        s.runs = static_cast<int>(values.size());
        s.best = *std::min_element(values.begin(), values.end());
        double total = 0;
        for (Time v : values) total += static_cast<double>(v);
        s.average = total / static_cast<double>(values.size());
        out.summaries.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Relative deviation index across configurations:
//   rdi = (f - f_best) / (f_worst - f_best), and 0 when all configurations
//   tie (the quotient is 0/0 there).

struct RdiTable {
    std::vector<std::string> configs;
    std::vector<std::string> instances;
    std::vector<std::vector<double>> rdi;  // [config][instance]
    std::vector<double> mean;              // per config
};

inline RdiTable compute_rdi(const std::vector<std::string>& configs,
                            const std::vector<std::string>& instances,
                            const std::vector<std::vector<double>>& avg_makespan) {
    if (configs.size() < 2) throw std::invalid_argument("rdi needs at least two configurations");
    RdiTable table;
    table.configs = configs;
    table.instances = instances;
    table.rdi.assign(configs.size(), std::vector<double>(instances.size(), 0.0));
    table.mean.assign(configs.size(), 0.0);
    for (std::size_t p = 0; p < instances.size(); ++p) {
        double best = avg_makespan[0][p], worst = avg_makespan[0][p];
        for (std::size_t c = 1; c < configs.size(); ++c) {
            best = std::min(best, avg_makespan[c][p]);
            worst = std::max(worst, avg_makespan[c][p]);
        }
        for (std::size_t c = 0; c < configs.size(); ++c)
            table.rdi[c][p] = worst > best ? (avg_makespan[c][p] - best) / (worst - best) : 0.0;
    }
    for (std::size_t c = 0; c < configs.size(); ++c) {
        double total = 0;
        for (double v : table.rdi[c]) total += v;
        table.mean[c] = instances.empty() ? 0.0 : total / static_cast<double>(instances.size());
    }
    return table;
}

/// Percent gap of a makespan over a known lower bound.
inline double compute_re(Time makespan, Time lower_bound) {
    if (lower_bound <= 0) throw std::invalid_argument("relative error needs a positive lower bound");
    return 100.0 * static_cast<double>(makespan - lower_bound) / static_cast<double>(lower_bound);
}

}  // namespace ops
