// Command-line harness: instance generation and validation, timed repeated
// solver experiments, and RDI / RE report tables.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ops/ops.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, n = 0, star = std::string::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::string> expand_patterns(const std::vector<std::string>& patterns) {
    std::set<std::string> out;
    for (const auto& pattern : patterns) {
        if (pattern.find('*') == std::string::npos && pattern.find('?') == std::string::npos) {
            out.insert(pattern);
            continue;
        }
        const fs::path p(pattern);
        const fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
        const std::string leaf = p.filename().string();
        if (!fs::is_directory(dir)) continue;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file() && glob_match(leaf, entry.path().filename().string()))
                out.insert(entry.path().string());
    }
    return {out.begin(), out.end()};
}

ops::GeneratorParams params_from_file(const std::string& path) {
    const auto j = nlohmann::json::parse(read_file(path));
    ops::GeneratorParams p;
    p.n = j.at("n").get<std::int32_t>();
    p.o_min = j.at("o_min").get<std::int32_t>();
    p.o_max = j.at("o_max").get<std::int32_t>();
    p.m_min = j.at("m_min").get<std::int32_t>();
    p.m_max = j.at("m_max").get<std::int32_t>();
    p.q = j.value("q", 0);
    return p;
}

int cmd_generate(int k, const std::string& params_file, std::uint64_t seed,
                 const std::string& output) {
    ops::GeneratorParams params;
    if (k > 0)
        params = ops::lops2_params(k);
    else
        params = params_from_file(params_file);
    params.seed = seed;
    const ops::Instance inst = ops::generate_instance(params);
    const std::string text = ops::serialize_instance(inst);
    if (output == "-")
        std::cout << text;
    else
        write_file(output, text);
    return 0;
}

int cmd_validate(const std::string& path) {
    ops::Instance inst;
    try {
        inst = ops::parse_instance(read_file(path));
    } catch (const ops::ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return 1;
    }
    const auto report = ops::validate_instance(inst);
    if (!report.ok()) {
        for (const auto& v : report.violations) std::cerr << path << ": " << v << "\n";
        return 1;
    }
    std::cout << path << ": valid (" << inst.num_jobs << " jobs, " << inst.num_ops()
              << " operations, " << inst.num_machines << " machines)\n";
    return 0;
}

int cmd_run(const std::vector<std::string>& instance_patterns, const std::string& methods_csv,
            int reps, double time_limit, std::uint64_t iterations, std::uint64_t seed,
            const std::string& out_dir, int threads) {
    ops::ExperimentSpec spec;
    spec.instance_paths = expand_patterns(instance_patterns);
    if (spec.instance_paths.empty()) {
        std::cerr << "no instance files matched\n";
        return 1;
    }
    std::stringstream ms(methods_csv);
    std::string token;
    while (std::getline(ms, token, ',')) {
        const auto method = ops::method_from_name(token);
        if (!method) {
            std::cerr << "unknown method: " << token << "\n";
            return 1;
        }
        spec.methods.push_back(*method);
    }
    spec.repetitions = reps;
    if (time_limit > 0) spec.budget.seconds = time_limit;
    if (iterations > 0) spec.budget.iterations = iterations;
    spec.base_seed = seed;
    spec.threads = threads;

    const ops::ExperimentResults results = ops::run_experiments(spec);

    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "results.csv").string(), ops::results_to_csv(results.rows));
    std::ostringstream summary;
    summary << "instance,method,runs,best,average\n";
    summary << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& s : results.summaries)
        summary << s.instance << ',' << s.method << ',' << s.runs << ',' << s.best << ','
                << s.average << '\n';
    write_file((fs::path(out_dir) / "summary.csv").string(), summary.str());
    std::cout << "wrote " << results.rows.size() << " rows to " << out_dir << "/results.csv\n";
    return 0;
}

int cmd_rdi(const std::string& dir) {
    const auto rows = ops::results_from_csv(read_file((fs::path(dir) / "results.csv").string()));
    std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;  // method -> instance
    std::set<std::string> instance_set;
    for (const auto& r : rows) {
        auto& cell = acc[r.method][r.instance];
        cell.first += static_cast<double>(r.makespan);
        cell.second += 1;
        instance_set.insert(r.instance);
    }
    std::vector<std::string> configs, instances(instance_set.begin(), instance_set.end());
    for (const auto& [method, _] : acc) configs.push_back(method);
    std::vector<std::vector<double>> avg(configs.size(), std::vector<double>(instances.size(), 0));
    for (std::size_t c = 0; c < configs.size(); ++c)
        for (std::size_t p = 0; p < instances.size(); ++p) {
            const auto it = acc[configs[c]].find(instances[p]);
            if (it == acc[configs[c]].end()) {
                std::cerr << "method " << configs[c] << " has no runs on " << instances[p] << "\n";
                return 1;
            }
            avg[c][p] = it->second.first / it->second.second;
        }

    const ops::RdiTable table = ops::compute_rdi(configs, instances, avg);
    std::ostringstream out;
    out << std::setprecision(6) << std::fixed;
    out << "method,instance,rdi\n";
    for (std::size_t c = 0; c < configs.size(); ++c)
        for (std::size_t p = 0; p < instances.size(); ++p)
            out << configs[c] << ',' << instances[p] << ',' << table.rdi[c][p] << '\n';
    for (std::size_t c = 0; c < configs.size(); ++c)
        out << configs[c] << ",mean," << table.mean[c] << '\n';
    write_file((fs::path(dir) / "rdi.csv").string(), out.str());
    std::cout << out.str();
    return 0;
}

int cmd_re(const std::string& dir, const std::string& lb_file) {
    const auto rows = ops::results_from_csv(read_file((fs::path(dir) / "results.csv").string()));
    std::map<std::string, ops::Time> lb;
    std::istringstream lbs(read_file(lb_file));
    std::string line;
    while (std::getline(lbs, line)) {
        if (line.empty() || line.rfind("instance", 0) == 0) continue;
        const auto f = ops::split_csv_line(line);
        if (f.size() != 2) {
            std::cerr << "lb file: malformed row: " << line << "\n";
            return 1;
        }
        lb[f[0]] = std::stoll(f[1]);
    }
    std::map<std::pair<std::string, std::string>, ops::Time> best;
    for (const auto& r : rows) {
        auto key = std::make_pair(r.method, r.instance);
        auto it = best.find(key);
        if (it == best.end() || r.makespan < it->second) best[key] = r.makespan;
    }
    std::ostringstream out;
    out << std::setprecision(4) << std::fixed;
    out << "method,instance,best,lb,re_percent\n";
    std::map<std::string, std::pair<double, int>> method_mean;
    for (const auto& [key, mks] : best) {
        const auto it = lb.find(key.second);
        if (it == lb.end()) {
            std::cerr << "no lower bound for instance " << key.second << "\n";
            return 1;
        }
        const double re = ops::compute_re(mks, it->second);
        out << key.first << ',' << key.second << ',' << mks << ',' << it->second << ',' << re << '\n';
        method_mean[key.first].first += re;
        method_mean[key.first].second += 1;
    }
    for (const auto& [method, sum] : method_mean)
        out << method << ",mean,,," << sum.first / sum.second << '\n';
    write_file((fs::path(dir) / "re.csv").string(), out.str());
    std::cout << out.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online printing shop scheduling: generator, validator, and solver benchmark"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a random instance file");
    int k = 0;
    std::string params_file, gen_out = "-";
    std::uint64_t gen_seed = 1;
    auto* k_opt = gen->add_option("--k", k, "large-family index (51..100)");
    auto* pf_opt = gen->add_option("--params", params_file, "generator parameter JSON file");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--output", gen_out, "output file ('-' for stdout)");
    k_opt->excludes(pf_opt);

    // validate
    auto* val = app.add_subcommand("validate", "parse and validate an instance file");
    std::string val_path;
    val->add_option("file", val_path, "instance file")->required();

    // run
    auto* run = app.add_subcommand("run", "run solver experiments");
    std::vector<std::string> run_instances;
    std::string run_methods = "tsde", run_out = "results";
    int run_reps = 1, run_threads = 0;
    double run_time = 0;
    std::uint64_t run_iters = 0, run_seed = 1;
    run->add_option("--instances", run_instances, "instance files or globs")->required();
    run->add_option("--methods", run_methods, "comma-separated: de,ga,ils,ts,tsde");
    run->add_option("--reps", run_reps, "repetitions per (instance, method)");
    auto* tl = run->add_option("--time-limit", run_time, "wall-clock limit per run, seconds");
    auto* it = run->add_option("--iterations", run_iters, "iteration budget per run (deterministic)");
    tl->excludes(it);
    run->add_option("--seed", run_seed, "base seed");
    run->add_option("-o,--output", run_out, "output directory");
    run->add_option("--threads", run_threads, "worker pool size (0: hardware threads)");

    // rdi
    auto* rdi = app.add_subcommand("rdi", "relative deviation index over a results directory");
    std::string rdi_dir;
    rdi->add_option("-i,--input", rdi_dir, "results directory")->required();

    // re
    auto* re = app.add_subcommand("re", "relative error against lower bounds");
    std::string re_dir, re_lb;
    re->add_option("-i,--input", re_dir, "results directory")->required();
    re->add_option("--lb-file", re_lb, "CSV file with instance,lb rows")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (k == 0 && params_file.empty())
                throw std::runtime_error("generate: need --k or --params");
            return cmd_generate(k, params_file, gen_seed, gen_out);
        }
        if (val->parsed()) return cmd_validate(val_path);
        if (run->parsed())
            return cmd_run(run_instances, run_methods, run_reps, run_time, run_iters, run_seed,
                           run_out, run_threads);
        if (rdi->parsed()) return cmd_rdi(rdi_dir);
        if (re->parsed()) return cmd_re(re_dir, re_lb);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
