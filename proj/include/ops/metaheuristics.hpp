#pragma once

// Solvers over the shared genotype: cost-based breadth-first construction,
// differential evolution, genetic algorithm, iterated local search, tabu
// search, and the three-phase TS+DE hybrid.  All randomness flows through
// one RngStream per run, so a run is a pure function of (instance, params,
// seed) under an iteration budget.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ops/decoder.hpp"
#include "ops/encoding.hpp"
#include "ops/instance.hpp"
#include "ops/local_search.hpp"
#include "ops/rng.hpp"

namespace ops {

enum class Method { DE, GA, ILS, TS, TSDE };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::DE: return "de";
        case Method::GA: return "ga";
        case Method::ILS: return "ils";
        case Method::TS: return "ts";
        case Method::TSDE: return "tsde";
    }
    return "?";
}

inline std::optional<Method> method_from_name(const std::string& name) {
    if (name == "de") return Method::DE;
    if (name == "ga") return Method::GA;
    if (name == "ils") return Method::ILS;
    if (name == "ts") return Method::TS;
    if (name == "tsde") return Method::TSDE;
    return std::nullopt;
}

enum class DeVariant { Rand1, Best1 };

/// Calibrated defaults; negative values resolve per instance size (the
/// medium/large split is taken at 200 operations).
struct SolverParams {
    Method method = Method::TSDE;
    int n_size = 8;
    double zeta = -1.0;    // DE scale; 0.7 for o <= 200, 0.1 otherwise
    double p_cro = 0.0;    // DE crossover probability
    DeVariant variant = DeVariant::Rand1;
    double p_mut = -1.0;   // GA mutation probability; 0.36 for o <= 200, 0.11 otherwise
    int p_hat = 2;         // ILS perturbation strength
    double lambda = 1.2;   // TS tenure factor

    SolverParams resolved(const Instance& inst) const {
        SolverParams p = *this;
        const bool medium = inst.num_ops() <= 200;
        if (p.zeta < 0) p.zeta = medium ? 0.7 : 0.1;
        if (p.p_mut < 0) p.p_mut = medium ? 0.36 : 0.11;
        return p;
    }
};

struct SolverResult {
    Encoded x;
    Schedule schedule;
    std::uint64_t units = 0;  // iteration count consumed
};

/// Optional run instrumentation for tests and tracing.
struct SolverMonitor {
    std::vector<Time> best_by_unit;                   // best-so-far after each counted unit
    std::vector<std::vector<Time>> generations;       // population fitness snapshots (DE/GA)
    std::vector<std::pair<OpId, MachineId>> ts_actions;  // chosen (op, source machine) per move
    std::vector<char> ts_fallback;                    // move taken with every neighbor tabu
};

/// Tabu tenure: ceil(lambda * ln(obar)^2).
inline std::int64_t tabu_tenure(double lambda, std::size_t obar) {
    const double l = std::log(std::max<double>(static_cast<double>(obar), 1.0));
    return static_cast<std::int64_t>(std::ceil(lambda * l * l));
}

/// Incumbent-stagnation window of the hybrid's first phase, in seconds.
inline double tsde_stagnation_seconds(OpId num_ops) {
    return std::log10(static_cast<double>(std::max<OpId>(num_ops, 2)));
}

/// Sequence all operations layer by layer: operations whose predecessors
/// are all sequenced enter the eligible set and are emitted in increasing
/// cost order.  Machines are chosen by smallest processing time.
inline Encoded cbfs_initial(const Instance& inst, const std::vector<double>& costs) {
    const OpId o = inst.num_ops();
    assert(static_cast<OpId>(costs.size()) == o);
    const NonFixedIndex nf(inst);

    Assignment asg;
    asg.kappa.assign(static_cast<std::size_t>(o) + 1, 0);
    asg.pi.assign(nf.obar(), 1);
    for (std::size_t j = 0; j < nf.obar(); ++j) {
        const auto& options = inst.op(nf.ops[j]).machines;
        std::size_t best = 0;
        for (std::size_t idx = 1; idx < options.size(); ++idx)
            if (options[idx].processing < options[best].processing) best = idx;
        asg.pi[j] = static_cast<std::int32_t>(best) + 1;
        asg.kappa[static_cast<std::size_t>(nf.ops[j])] = options[best].machine;
    }
    for (const auto& f : inst.fixed) asg.kappa[static_cast<std::size_t>(f.op)] = f.machine;

    std::vector<std::int32_t> pending(static_cast<std::size_t>(o) + 1, 0);
    for (OpId i = 1; i <= o; ++i)
        pending[static_cast<std::size_t>(i)] =
            static_cast<std::int32_t>(inst.dag.predecessors(i).size());
    std::vector<OpId> eligible;
    for (OpId i = 1; i <= o; ++i)
        if (pending[static_cast<std::size_t>(i)] == 0) eligible.push_back(i);

    std::vector<OpId> order;  // non-fixed ops only, in sequencing order
    order.reserve(nf.obar());
    while (!eligible.empty()) {
        std::sort(eligible.begin(), eligible.end(), [&](OpId a, OpId b) {
            const double ca = costs[static_cast<std::size_t>(a) - 1];
            const double cb = costs[static_cast<std::size_t>(b) - 1];
            return ca != cb ? ca < cb : a < b;
        });
        std::vector<OpId> next;
        for (OpId i : eligible) {
            if (nf.is_encoded(i)) order.push_back(i);
            for (OpId s : inst.dag.successors(i))
                if (--pending[static_cast<std::size_t>(s)] == 0) next.push_back(s);
        }
        eligible = std::move(next);
    }
    return reencode_from_order(asg, order, inst);
}

inline Encoded cbfs_random(const Instance& inst, RngStream& rng) {
    std::vector<double> costs(static_cast<std::size_t>(inst.num_ops()));
    for (double& c : costs) c = rng.next_double();
    return cbfs_initial(inst, costs);
}

/// Resample p_hat distinct positions of the genotype.
inline Encoded perturb(const Encoded& x, int p_hat, RngStream& rng) {
    Encoded out = x;
    const auto n = static_cast<std::int64_t>(x.keys.size());
    for (std::int64_t idx : rng.sample_distinct(0, n - 1, static_cast<std::size_t>(p_hat)))
        out.keys[static_cast<std::size_t>(idx)] = rng.next_double();
    return out;
}

namespace detail {

struct Member {
    Encoded x;
    Time fitness = 0;
};

inline Time best_fitness(const std::vector<Member>& pop) {
    Time best = std::numeric_limits<Time>::max();
    for (const auto& m : pop) best = std::min(best, m.fitness);
    return best;
}

inline std::size_t best_index(const std::vector<Member>& pop) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (pop[i].fitness < pop[best].fitness) best = i;
    return best;
}

inline SolverResult finish(const Instance& inst, const Encoded& x, std::uint64_t units) {
    SolverResult res;
    res.x = x;
    res.schedule = decode(x, inst);
    res.units = units;
    return res;
}

/// Trivial case: every operation fixed, nothing to search.
inline std::optional<SolverResult> all_fixed_shortcut(const Instance& inst) {
    if (!inst.non_fixed_ops().empty()) return std::nullopt;
    return finish(inst, Encoded{}, 0);
}

}  // namespace detail

inline Encoded de_mutant(const Encoded& a, const Encoded& b, const Encoded& c, double zeta) {
    Encoded v = a;
    for (std::size_t g = 0; g < v.keys.size(); ++g) {
        const double raw = a.keys[g] + zeta * (b.keys[g] - c.keys[g]);
        v.keys[g] = std::max(0.0, std::min(raw, 1.0 - 1e-16));
    }
    return v;
}

/// Binomial crossover with one forced index.
inline Encoded de_crossover(const Encoded& base, const Encoded& mutant, double p_cro,
                            RngStream& rng) {
    Encoded u = base;
    const auto n = static_cast<std::int64_t>(base.keys.size());
    const std::int64_t forced = rng.next_int(0, n - 1);
    for (std::int64_t g = 0; g < n; ++g) {
        const double gamma = rng.next_double();
        if (gamma <= p_cro || g == forced) u.keys[static_cast<std::size_t>(g)] =
            mutant.keys[static_cast<std::size_t>(g)];
    }
    return u;
}

/// Uniform crossover: each gene stays or swaps with probability one half.
inline std::pair<Encoded, Encoded> ga_crossover(const Encoded& p1, const Encoded& p2,
                                                RngStream& rng) {
    Encoded c1 = p1, c2 = p2;
    for (std::size_t g = 0; g < p1.keys.size(); ++g) {
        if (rng.next_double() > 0.5) {
            c1.keys[g] = p2.keys[g];
            c2.keys[g] = p1.keys[g];
        }
    }
    return {std::move(c1), std::move(c2)};
}

namespace detail {

inline std::uint64_t distinct_index(RngStream& rng, std::uint64_t n,
                                    std::initializer_list<std::uint64_t> taken) {
    for (;;) {
        const auto r = static_cast<std::uint64_t>(rng.next_int(0, static_cast<std::int64_t>(n) - 1));
        bool clash = false;
        for (std::uint64_t t : taken) clash = clash || (t == r);
        if (!clash) return r;
    }
}

inline void snapshot(SolverMonitor* monitor, const std::vector<Member>& pop) {
    if (!monitor) return;
    std::vector<Time> fits;
    fits.reserve(pop.size());
    for (const auto& m : pop) fits.push_back(m.fitness);
    monitor->generations.push_back(std::move(fits));
}

inline void note_unit(SolverMonitor* monitor, Time best) {
    if (monitor) monitor->best_by_unit.push_back(best);
}

inline SolverResult de_loop(const Instance& inst, const SolverParams& params, BudgetClock& clock,
                            RngStream& rng, std::vector<Member> pop, SolverMonitor* monitor) {
    const auto n = static_cast<std::uint64_t>(params.n_size);
    snapshot(monitor, pop);
    while (!clock.exhausted(best_fitness(pop))) {
        for (std::uint64_t i = 0; i < n && !clock.exhausted(best_fitness(pop)); ++i) {
            std::uint64_t r1;
            if (params.variant == DeVariant::Rand1) {
                r1 = distinct_index(rng, n, {i});
            } else {
                r1 = best_index(pop);
            }
            const std::uint64_t r2 = distinct_index(rng, n, {i, r1});
            const std::uint64_t r3 = distinct_index(rng, n, {i, r1, r2});
            const Encoded mutant = de_mutant(pop[r1].x, pop[r2].x, pop[r3].x, params.zeta);
            const Encoded trial = de_crossover(pop[i].x, mutant, params.p_cro, rng);
            LocalSearchResult ls = local_search(trial, inst, &clock);
            clock.count_unit();
            if (ls.schedule.makespan < pop[i].fitness)
                pop[i] = {std::move(ls.x), ls.schedule.makespan};
            note_unit(monitor, best_fitness(pop));
        }
        snapshot(monitor, pop);
    }
    return finish(inst, pop[best_index(pop)].x, clock.units());
}

struct TsOptions {
    std::optional<double> stagnation_seconds;
    std::optional<std::uint64_t> stagnation_units;
    std::optional<std::uint64_t> unit_cap;  // absolute cap on clock units
};

inline SolverResult ts_loop(const Instance& inst, const SolverParams& params, BudgetClock& clock,
                            RngStream& rng, const TsOptions& opt, SolverMonitor* monitor) {
    const NonFixedIndex nf(inst);
    Encoded x = cbfs_random(inst, rng);
    Schedule cur = decode(x, inst);
    Encoded best_x = x;
    Time best = cur.makespan;

    const std::int64_t tenure = tabu_tenure(params.lambda, nf.obar());

    std::vector<std::vector<std::int64_t>> tabu_until(
        static_cast<std::size_t>(inst.num_ops()) + 1,
        std::vector<std::int64_t>(static_cast<std::size_t>(inst.num_machines) + 1, 0));

    std::int64_t iter = 0;
    double improve_stamp = clock.elapsed_seconds();
    std::uint64_t improve_unit = clock.units();
    while (!clock.exhausted(best)) {
        if (opt.unit_cap && clock.units() >= *opt.unit_cap) break;
        if (opt.stagnation_seconds &&
            clock.elapsed_seconds() - improve_stamp >= *opt.stagnation_seconds)
            break;
        if (opt.stagnation_units && clock.units() - improve_unit >= *opt.stagnation_units) break;

        ++iter;
        const SolutionDigraph g = build_digraph(inst, cur);
        const TailTimes tails = tail_times(g);
        const std::vector<Move> moves = neighborhood(inst, cur, g, tails);
        if (moves.empty()) break;

        auto action_machine = [&](const Move& m) {
            return cur.machine_of[static_cast<std::size_t>(m.op)];
        };
        auto is_tabu = [&](const Move& m) {
            return tabu_until[static_cast<std::size_t>(m.op)]
                             [static_cast<std::size_t>(action_machine(m))] > iter;
        };

        const Move* first = nullptr;
        const Move* second = nullptr;
        for (const Move& m : moves) {
            if (is_tabu(m)) continue;
            if (!first || m.estimate < first->estimate) {
                second = first;
                first = &m;
            } else if (!second || m.estimate < second->estimate) {
                second = &m;
            }
        }
        const Move* chosen;
        if (first && second) {
            chosen = rng.next_int(0, 1) == 0 ? first : second;
        } else if (first) {
            chosen = first;
        } else {  // all tabu: least-recently forbidden action
            chosen = &moves.front();
            for (const Move& m : moves) {
                const auto t_m = tabu_until[static_cast<std::size_t>(m.op)]
                                           [static_cast<std::size_t>(action_machine(m))];
                const auto t_c = tabu_until[static_cast<std::size_t>(chosen->op)]
                                           [static_cast<std::size_t>(action_machine(*chosen))];
                if (t_m < t_c) chosen = &m;
            }
        }

        if (monitor) {
            monitor->ts_actions.emplace_back(chosen->op, action_machine(*chosen));
            monitor->ts_fallback.push_back(first == nullptr);
        }
        tabu_until[static_cast<std::size_t>(chosen->op)]
                  [static_cast<std::size_t>(action_machine(*chosen))] = iter + tenure;
        auto [nx, nsched] = apply_move(inst, cur, *chosen);
        x = std::move(nx);
        cur = std::move(nsched);
        clock.count_unit();
        if (cur.makespan < best) {
            best = cur.makespan;
            best_x = x;
            improve_stamp = clock.elapsed_seconds();
            improve_unit = clock.units();
        }
        note_unit(monitor, best);
    }
    return finish(inst, best_x, clock.units());
}

}  // namespace detail

inline SolverResult run_de(const Instance& inst, const SolverParams& raw, const Budget& budget,
                           RngStream& rng, SolverMonitor* monitor = nullptr) {
    if (raw.n_size < 4) throw std::invalid_argument("DE requires n_size >= 4");
    if (auto trivial = detail::all_fixed_shortcut(inst)) return *trivial;
    const SolverParams params = raw.resolved(inst);
    BudgetClock clock(budget);
    std::vector<detail::Member> pop;
    pop.reserve(static_cast<std::size_t>(params.n_size));
    for (int i = 0; i < params.n_size; ++i) {
        Encoded x = cbfs_random(inst, rng);
        const Time fit = decode(x, inst).makespan;
        pop.push_back({std::move(x), fit});
    }
    return detail::de_loop(inst, params, clock, rng, std::move(pop), monitor);
}

inline SolverResult run_ga(const Instance& inst, const SolverParams& raw, const Budget& budget,
                           RngStream& rng, SolverMonitor* monitor = nullptr) {
    if (raw.n_size < 4 || raw.n_size % 2 != 0)
        throw std::invalid_argument("GA requires an even n_size >= 4");
    if (auto trivial = detail::all_fixed_shortcut(inst)) return *trivial;
    const SolverParams params = raw.resolved(inst);
    const auto n = static_cast<std::uint64_t>(params.n_size);
    BudgetClock clock(budget);

    std::vector<detail::Member> pop;
    for (std::uint64_t i = 0; i < n; ++i) {
        Encoded x = cbfs_random(inst, rng);
        const Time fit = decode(x, inst).makespan;
        pop.push_back({std::move(x), fit});
    }
    Encoded best_x = pop[detail::best_index(pop)].x;
    Time best = detail::best_fitness(pop);
    detail::snapshot(monitor, pop);

    const auto genes = static_cast<std::int64_t>(2 * NonFixedIndex(inst).obar());
    while (!clock.exhausted(best)) {
        std::vector<detail::Member> next;
        next.reserve(n);
        for (std::uint64_t pair = 0; pair < n / 2 && !clock.exhausted(best); ++pair) {
            const std::uint64_t r1 = detail::distinct_index(rng, n, {});
            const std::uint64_t r2 = detail::distinct_index(rng, n, {r1});
            const std::uint64_t r3 = detail::distinct_index(rng, n, {r1, r2});
            const std::uint64_t r4 = detail::distinct_index(rng, n, {r1, r2, r3});
            const Encoded& p1 = pop[pop[r1].fitness <= pop[r2].fitness ? r1 : r2].x;
            const Encoded& p2 = pop[pop[r3].fitness <= pop[r4].fitness ? r3 : r4].x;

            auto [c1, c2] = ga_crossover(p1, p2, rng);
            for (Encoded* child : {&c1, &c2}) {
                if (rng.next_double() <= params.p_mut) {
                    const std::int64_t r = rng.next_int(0, genes - 1);
                    child->keys[static_cast<std::size_t>(r)] = rng.next_double();
                }
                LocalSearchResult ls = local_search(*child, inst, &clock);
                clock.count_unit();
                const Time fit = ls.schedule.makespan;
                next.push_back({std::move(ls.x), fit});
                if (fit < best) {
                    best = fit;
                    best_x = next.back().x;
                }
                detail::note_unit(monitor, best);
                if (clock.exhausted(best)) break;
            }
        }
        if (next.empty()) break;
        // Elitism: keep the previous best alive if the new generation lost it.
        const std::size_t old_best = detail::best_index(pop);
        std::size_t new_best = 0, new_worst = 0;
        for (std::size_t i = 1; i < next.size(); ++i) {
            if (next[i].fitness < next[new_best].fitness) new_best = i;
            if (next[i].fitness > next[new_worst].fitness) new_worst = i;
        }
        if (next[new_best].fitness > pop[old_best].fitness) next[new_worst] = pop[old_best];
        pop = std::move(next);
        while (pop.size() < n) pop.push_back(pop[detail::best_index(pop)]);  // budget cut a pair short
        detail::snapshot(monitor, pop);
    }
    return detail::finish(inst, best_x, clock.units());
}

inline SolverResult run_ils(const Instance& inst, const SolverParams& params, const Budget& budget,
                            RngStream& rng, SolverMonitor* monitor = nullptr) {
    if (auto trivial = detail::all_fixed_shortcut(inst)) return *trivial;
    const auto genes = static_cast<int>(2 * NonFixedIndex(inst).obar());
    if (params.p_hat < 1 || params.p_hat > genes)
        throw std::invalid_argument("ILS perturbation strength out of range");
    BudgetClock clock(budget);

    Encoded x = cbfs_random(inst, rng);
    Time fx = decode(x, inst).makespan;
    Encoded pert = x;
    while (!clock.exhausted(fx)) {
        LocalSearchResult ls = local_search(pert, inst, &clock);
        clock.count_unit();
        if (ls.schedule.makespan <= fx) {  // non-strict acceptance
            fx = ls.schedule.makespan;
            x = std::move(ls.x);
        }
        detail::note_unit(monitor, fx);
        pert = perturb(x, params.p_hat, rng);
    }
    return detail::finish(inst, x, clock.units());
}

inline SolverResult run_ts(const Instance& inst, const SolverParams& params, const Budget& budget,
                           RngStream& rng, SolverMonitor* monitor = nullptr) {
    if (params.lambda < 0 || params.lambda > 2)
        throw std::invalid_argument("TS tenure factor out of [0,2]");
    if (auto trivial = detail::all_fixed_shortcut(inst)) return *trivial;
    BudgetClock clock(budget);
    return detail::ts_loop(inst, params, clock, rng, {}, monitor);
}

/// Three phases: TS until its incumbent stalls, a perturbation-built
/// population around the TS solution, then DE seeded with it.
inline SolverResult run_tsde(const Instance& inst, const SolverParams& raw, const Budget& budget,
                             RngStream& rng, SolverMonitor* monitor = nullptr) {
    if (raw.n_size < 4) throw std::invalid_argument("TS+DE requires n_size >= 4");
    if (auto trivial = detail::all_fixed_shortcut(inst)) return *trivial;
    const SolverParams params = raw.resolved(inst);
    BudgetClock clock(budget);

    detail::TsOptions opt;
    if (clock.wall_mode()) {
        opt.stagnation_seconds = tsde_stagnation_seconds(inst.num_ops());
    } else {
        // Deterministic analogue of the wall-clock stagnation window.
        opt.stagnation_units = std::max<std::uint64_t>(1, budget.iterations.value_or(10) / 10);
        opt.unit_cap = budget.iterations.value_or(10) / 2;
    }
    SolverResult ts = detail::ts_loop(inst, params, clock, rng, opt, monitor);
    if (clock.exhausted(ts.schedule.makespan))
        return detail::finish(inst, ts.x, clock.units());

    std::vector<detail::Member> pop;
    pop.push_back({ts.x, ts.schedule.makespan});
    for (int i = 1; i < params.n_size && !clock.exhausted(detail::best_fitness(pop)); ++i) {
        LocalSearchResult ls = local_search(perturb(ts.x, params.p_hat, rng), inst, &clock);
        clock.count_unit();
        pop.push_back({std::move(ls.x), ls.schedule.makespan});
        detail::note_unit(monitor, detail::best_fitness(pop));
    }
    while (pop.size() < static_cast<std::size_t>(params.n_size)) pop.push_back(pop.front());

    return detail::de_loop(inst, params, clock, rng, std::move(pop), monitor);
}

inline SolverResult run_method(const Instance& inst, const SolverParams& params,
                               const Budget& budget, RngStream& rng,
                               SolverMonitor* monitor = nullptr) {
    switch (params.method) {
        case Method::DE: return run_de(inst, params, budget, rng, monitor);
        case Method::GA: return run_ga(inst, params, budget, rng, monitor);
        case Method::ILS: return run_ils(inst, params, budget, rng, monitor);
        case Method::TS: return run_ts(inst, params, budget, rng, monitor);
        case Method::TSDE: return run_tsde(inst, params, budget, rng, monitor);
    }
    throw std::invalid_argument("unknown method");
}

}  // namespace ops
