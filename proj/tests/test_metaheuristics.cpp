#include <map>

#include <catch2/catch_amalgamated.hpp>

#include "ops/metaheuristics.hpp"
#include "support/graph_oracle.hpp"
#include "support/micro.hpp"

using namespace ops;
using ops::test::micro_instance;

namespace {

Instance chain_instance(int length) {
    Instance inst;
    inst.num_jobs = 1;
    inst.num_machines = 2;
    inst.operations.push_back({});
    std::vector<std::pair<OpId, OpId>> arcs;
    for (OpId i = 1; i <= length; ++i) {
        OperationSpec op;
        op.id = i;
        op.job = 1;
        op.machines = {{1, 4}, {2, 3}};
        inst.operations.push_back(op);
        if (i > 1) arcs.emplace_back(i - 1, i);
    }
    inst.dag = PrecedenceDag(length, arcs);
    inst.calendars.assign(3, {});
    return inst;
}

}  // namespace

TEST_CASE("cbfs picks the fastest machine and respects chains") {
    const Instance inst = chain_instance(5);
    std::vector<double> costs = {0.9, 0.1, 0.8, 0.2, 0.5};
    const Encoded x = cbfs_initial(inst, costs);
    const Assignment asg = decode_assignment(x, inst);
    for (OpId i = 1; i <= 5; ++i) CHECK(asg.kappa[static_cast<std::size_t>(i)] == 2);

    // A chain is sequenced as the chain no matter the costs.
    const SequenceOrder seq = decode_sequence(x, asg, inst);
    CHECK(seq.sigma == std::vector<OpId>{1, 2, 3, 4, 5});

    const Schedule sched = decode(x, inst);
    CHECK(ops::test::schedule_violations(inst, sched).empty());
}

TEST_CASE("cbfs machine tie breaks to the smaller id") {
    Instance inst = chain_instance(1);
    inst.operations[1].machines = {{1, 3}, {2, 3}};
    const Encoded x = cbfs_initial(inst, {0.5});
    CHECK(decode_assignment(x, inst).kappa[1] == 1);
}

TEST_CASE("differential mutation arithmetic and clamping") {
    Encoded a, b, c;
    a.keys = {0.4, 0.0, 0.9};
    b.keys = {0.8, 0.1, 0.9};
    c.keys = {0.2, 0.9, 0.1};
    const Encoded v = de_mutant(a, b, c, 0.5);
    CHECK(v.keys[0] == Catch::Approx(0.7));        // 0.4 + 0.5*(0.8-0.2)
    CHECK(v.keys[1] == 0.0);                        // clamped below
    CHECK(v.keys[2] == Catch::Approx(1.0 - 1e-16)); // clamped above
    CHECK(v.keys[2] < 1.0);

    // Zero difference vector: mutant equals the clamped base.
    const Encoded same = de_mutant(a, b, b, 0.7);
    CHECK(same.keys == a.keys);
}

TEST_CASE("crossover with p_cro = 0 passes exactly one mutant gene") {
    RngStream rng(12, 0);
    Encoded base, mutant;
    base.keys.assign(20, 0.25);
    mutant.keys.assign(20, 0.75);
    for (int trial = 0; trial < 50; ++trial) {
        const Encoded trial_vec = de_crossover(base, mutant, 0.0, rng);
        int differing = 0;
        for (std::size_t g = 0; g < base.keys.size(); ++g)
            if (trial_vec.keys[g] != base.keys[g]) ++differing;
        CHECK(differing == 1);
    }
}

TEST_CASE("uniform crossover of identical parents is the identity") {
    RngStream rng(77, 0);
    Encoded p;
    p.keys = {0.1, 0.2, 0.3, 0.4};
    const auto [c1, c2] = ga_crossover(p, p, rng);
    CHECK(c1.keys == p.keys);
    CHECK(c2.keys == p.keys);

    // Different parents: children exchange genes but preserve the multiset.
    Encoded q;
    q.keys = {0.9, 0.8, 0.7, 0.6};
    const auto [d1, d2] = ga_crossover(p, q, rng);
    for (std::size_t g = 0; g < p.keys.size(); ++g) {
        const bool straight = d1.keys[g] == p.keys[g] && d2.keys[g] == q.keys[g];
        const bool swapped = d1.keys[g] == q.keys[g] && d2.keys[g] == p.keys[g];
        CHECK((straight || swapped));
    }
}

TEST_CASE("perturbation resamples exactly the requested positions") {
    RngStream rng(5, 0);
    Encoded x;
    x.keys.assign(12, 0.5);
    const Encoded y = perturb(x, 4, rng);
    int differing = 0;
    for (std::size_t g = 0; g < x.keys.size(); ++g)
        if (y.keys[g] != x.keys[g]) ++differing;
    CHECK(differing == 4);

    // Full-width perturbation resamples everything.
    const Encoded z = perturb(x, 12, rng);
    int changed = 0;
    for (std::size_t g = 0; g < x.keys.size(); ++g)
        if (z.keys[g] != x.keys[g]) ++changed;
    CHECK(changed == 12);
}

TEST_CASE("tabu tenure formula") {
    CHECK(tabu_tenure(1.2, 100) == 26);  // ceil(1.2 * ln(100)^2) = ceil(25.449)
    CHECK(tabu_tenure(0.0, 100) == 0);
    CHECK(tabu_tenure(1.0, 1) == 0);
    CHECK(tsde_stagnation_seconds(1000) == Catch::Approx(3.0));
    CHECK(tsde_stagnation_seconds(100) == Catch::Approx(2.0));
}

TEST_CASE("parameter validation") {
    const Instance inst = micro_instance(3);
    RngStream rng(1, 0);
    Budget budget;
    budget.iterations = 2;
    SolverParams p;
    p.n_size = 3;
    CHECK_THROWS_AS(run_de(inst, p, budget, rng), std::invalid_argument);
    p.n_size = 5;
    CHECK_THROWS_AS(run_ga(inst, p, budget, rng), std::invalid_argument);
    p.n_size = 8;
    p.p_hat = 0;
    CHECK_THROWS_AS(run_ils(inst, p, budget, rng), std::invalid_argument);
    p.p_hat = 2;
    p.lambda = 3.0;
    CHECK_THROWS_AS(run_ts(inst, p, budget, rng), std::invalid_argument);
}

TEST_CASE("size-dependent parameter resolution") {
    const Instance small = micro_instance(1);
    SolverParams p;
    const SolverParams rs = p.resolved(small);
    CHECK(rs.zeta == 0.7);
    CHECK(rs.p_mut == 0.36);
    SolverParams forced;
    forced.zeta = 0.25;
    CHECK(forced.resolved(small).zeta == 0.25);
}

TEST_CASE("iteration-budget runs are reproducible") {
    const Instance inst = micro_instance(11);
    Budget budget;
    budget.iterations = 24;
    for (Method m : {Method::DE, Method::GA, Method::ILS, Method::TS, Method::TSDE}) {
        SolverParams params;
        params.method = m;
        RngStream r1(2026, 9), r2(2026, 9);
        const SolverResult a = run_method(inst, params, budget, r1);
        const SolverResult b = run_method(inst, params, budget, r2);
        CAPTURE(method_name(m));
        CHECK(a.schedule.makespan == b.schedule.makespan);
        CHECK(a.x.keys == b.x.keys);
        CHECK(ops::test::schedule_violations(inst, a.schedule).empty());
    }
}

TEST_CASE("best-so-far traces are monotone and population fitness never worsens") {
    const Instance inst = micro_instance(17);
    Budget budget;
    budget.iterations = 40;
    for (Method m : {Method::DE, Method::GA, Method::ILS, Method::TS, Method::TSDE}) {
        SolverParams params;
        params.method = m;
        RngStream rng(31, 4);
        SolverMonitor monitor;
        const SolverResult res = run_method(inst, params, budget, rng, &monitor);
        CAPTURE(method_name(m));
        for (std::size_t i = 1; i < monitor.best_by_unit.size(); ++i)
            CHECK(monitor.best_by_unit[i] <= monitor.best_by_unit[i - 1]);
        if (!monitor.best_by_unit.empty())
            CHECK(res.schedule.makespan == monitor.best_by_unit.back());

        if (m == Method::DE) {
            // Greedy replacement: the sorted fitness vector never worsens.
            for (std::size_t g = 1; g < monitor.generations.size(); ++g) {
                auto prev = monitor.generations[g - 1];
                auto cur = monitor.generations[g];
                std::sort(prev.begin(), prev.end());
                std::sort(cur.begin(), cur.end());
                REQUIRE(prev.size() == cur.size());
                for (std::size_t i = 0; i < cur.size(); ++i) CHECK(cur[i] <= prev[i]);
            }
        }
        if (m == Method::GA) {
            // Elitism: the generation best never worsens.
            for (std::size_t g = 1; g < monitor.generations.size(); ++g)
                CHECK(*std::min_element(monitor.generations[g].begin(),
                                        monitor.generations[g].end()) <=
                      *std::min_element(monitor.generations[g - 1].begin(),
                                        monitor.generations[g - 1].end()));
        }
    }
}

TEST_CASE("tabu bookkeeping: actions are not repeated inside the tenure") {
    const Instance inst = micro_instance(23);
    const std::size_t obar = NonFixedIndex(inst).obar();
    SolverParams params;
    params.method = Method::TS;
    params.lambda = 2.0;
    Budget budget;
    budget.iterations = 60;
    RngStream rng(8, 2);
    SolverMonitor monitor;
    run_ts(inst, params, budget, rng, &monitor);

    const std::int64_t tenure = tabu_tenure(params.lambda, obar);
    std::map<std::pair<OpId, MachineId>, std::int64_t> last_used;
    for (std::size_t it = 0; it < monitor.ts_actions.size(); ++it) {
        const auto action = monitor.ts_actions[it];
        const auto found = last_used.find(action);
        if (found != last_used.end() && !monitor.ts_fallback[it]) {
            // tabu_until = t0 + tenure, usable again when iter > that
            CHECK(static_cast<std::int64_t>(it) + 1 > found->second + tenure);
        }
        last_used[action] = static_cast<std::int64_t>(it) + 1;
    }
}

TEST_CASE("solvers on an all-fixed instance return the fixed schedule") {
    Instance inst;
    inst.num_jobs = 1;
    inst.num_machines = 1;
    inst.operations.push_back({});
    OperationSpec op;
    op.id = 1;
    op.job = 1;
    op.machines = {{1, 4}};
    inst.operations.push_back(op);
    inst.dag = PrecedenceDag(1, {});
    inst.calendars.assign(2, {});
    inst.fixed = {{1, 1, 3}};

    RngStream rng(1, 0);
    Budget budget;
    budget.iterations = 1;
    const SolverResult res = run_tsde(inst, SolverParams{}, budget, rng);
    CHECK(res.schedule.makespan == 7);
}
