#pragma once

// Random instance generation.  The large-instance parameter schedule (jobs,
// operations per job, machine range, downtime cap) follows the published
// formulas; the remaining distributions are this library's documented
// choices: processing times U[1,99], setups U[1,20], 3% of operations get a
// release time in U[1,100], 10% get an overlap coefficient in {0.2,...,0.9},
// per-job DAGs wire every non-root operation to 1-2 random earlier
// operations, downtime lengths are U[5,50] placed disjointly over a horizon
// of eight mean job loads, and 0-2 root operations become fixed.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ops/instance.hpp"
#include "ops/rng.hpp"

namespace ops {

struct GeneratorParams {
    std::int32_t n = 1;       // jobs
    std::int32_t o_min = 1;   // operations per job, inclusive range
    std::int32_t o_max = 1;
    std::int32_t m_min = 1;   // machine-count range
    std::int32_t m_max = 1;
    std::int32_t q = 0;       // max downtime periods per machine
    std::uint64_t seed = 1;
};

namespace detail {
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }
}

/// Parameter schedule of the large instance family, index k in 51..100.
inline GeneratorParams lops2_params(int k) {
    if (k < 51 || k > 100) throw std::out_of_range("lops2_params: k must be in 51..100");
    GeneratorParams p;
    p.n = static_cast<std::int32_t>(11 + detail::ceil_div(static_cast<std::int64_t>(k) * 189, 100));
    p.o_min = 5;
    p.o_max = static_cast<std::int32_t>(6 + detail::ceil_div(static_cast<std::int64_t>(k) * 14, 100));
    p.m_min = static_cast<std::int32_t>(9 + detail::ceil_div(static_cast<std::int64_t>(k) * 20, 100));
    p.m_max = static_cast<std::int32_t>(10 + detail::ceil_div(static_cast<std::int64_t>(k) * 90, 100));
    p.q = 8;
    return p;
}

inline Instance generate_instance(const GeneratorParams& params) {
    if (params.n < 1 || params.o_min < 1 || params.o_min > params.o_max || params.m_min < 1 ||
        params.m_min > params.m_max || params.q < 0)
        throw std::invalid_argument("generate_instance: bad parameters");

    RngStream rng(params.seed, 0);
    Instance inst;
    inst.num_jobs = params.n;
    inst.num_machines = static_cast<std::int32_t>(rng.next_int(params.m_min, params.m_max));

    // Jobs, operations, and the per-job precedence wiring.
    std::vector<std::pair<OpId, OpId>> arcs;
    inst.operations.push_back({});  // index 0 unused
    for (std::int32_t job = 1; job <= params.n; ++job) {
        const auto count = static_cast<std::int32_t>(rng.next_int(params.o_min, params.o_max));
        const OpId first = static_cast<OpId>(inst.operations.size());
        for (std::int32_t t = 0; t < count; ++t) {
            OperationSpec op;
            op.id = static_cast<OpId>(inst.operations.size());
            op.job = job;
            inst.operations.push_back(std::move(op));
            if (t > 0) {
                const auto preds = rng.sample_distinct(
                    first, first + t - 1,
                    static_cast<std::size_t>(rng.next_int(1, std::min<std::int64_t>(2, t))));
                for (std::int64_t p : preds)
                    arcs.emplace_back(static_cast<OpId>(p), static_cast<OpId>(first + t));
            }
        }
    }
    const OpId o = static_cast<OpId>(inst.operations.size()) - 1;
    inst.dag = PrecedenceDag(o, arcs);

    // Eligible machines and processing times.
    const auto flex_cap = std::min<std::int64_t>(inst.num_machines, 5);
    for (OpId i = 1; i <= o; ++i) {
        auto& op = inst.operations[static_cast<std::size_t>(i)];
        const auto flex = rng.next_int(1, flex_cap);
        auto machines = rng.sample_distinct(1, inst.num_machines, static_cast<std::size_t>(flex));
        std::sort(machines.begin(), machines.end());
        for (std::int64_t k : machines)
            op.machines.push_back({static_cast<MachineId>(k), rng.next_int(1, 99)});
    }

    // Fixed operations: up to two roots, forced onto a single machine.
    std::vector<OpId> roots;
    for (OpId i = 1; i <= o; ++i)
        if (inst.dag.predecessors(i).empty()) roots.push_back(i);
    std::vector<OpId> fixed_ops;
    const auto fixed_count = std::min<std::int64_t>(rng.next_int(0, 2),
                                                    static_cast<std::int64_t>(roots.size()));
    for (std::int64_t idx :
         rng.sample_distinct(0, static_cast<std::int64_t>(roots.size()) - 1,
                             static_cast<std::size_t>(fixed_count)))
        fixed_ops.push_back(roots[static_cast<std::size_t>(idx)]);
    std::sort(fixed_ops.begin(), fixed_ops.end());
    for (OpId i : fixed_ops) {
        auto& op = inst.operations[static_cast<std::size_t>(i)];
        const auto pick =
            static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(op.machines.size()) - 1));
        op.machines = {op.machines[pick]};
    }

    // Releases and overlap coefficients (fixed operations keep release 0).
    for (OpId i = 1; i <= o; ++i) {
        auto& op = inst.operations[static_cast<std::size_t>(i)];
        const bool is_fixed = std::binary_search(fixed_ops.begin(), fixed_ops.end(), i);
        if (rng.next_int(1, 100) <= 3 && !is_fixed) op.release = rng.next_int(1, 100);
        if (rng.next_int(1, 100) <= 10) op.theta = Rational(rng.next_int(2, 9), 10);
    }

    // Sequence-dependent setups over the final eligibility sets.
    std::vector<std::vector<OpId>> on_machine(static_cast<std::size_t>(inst.num_machines) + 1);
    for (OpId i = 1; i <= o; ++i)
        for (const auto& mo : inst.operations[static_cast<std::size_t>(i)].machines)
            on_machine[static_cast<std::size_t>(mo.machine)].push_back(i);
    for (MachineId k = 1; k <= inst.num_machines; ++k) {
        for (OpId to : on_machine[static_cast<std::size_t>(k)]) {
            inst.setup.set_initial(k, to, rng.next_int(1, 20));
            for (OpId from : on_machine[static_cast<std::size_t>(k)])
                if (from != to) inst.setup.set(k, from, to, rng.next_int(1, 20));
        }
    }

    // Downtime calendars over a horizon of eight mean job loads.
    Time total_mean = 0;
    for (OpId i = 1; i <= o; ++i) {
        const auto& mos = inst.operations[static_cast<std::size_t>(i)].machines;
        Time sum = 0;
        for (const auto& mo : mos) sum += mo.processing;
        total_mean += sum / static_cast<Time>(mos.size());
    }
    const Time horizon = std::max<Time>(100, 8 * total_mean / params.n);

    inst.calendars.assign(static_cast<std::size_t>(inst.num_machines) + 1, {});
    for (MachineId k = 1; k <= inst.num_machines; ++k) {
        const auto count = rng.next_int(0, params.q);
        if (count == 0) continue;
        std::vector<Time> lengths;
        Time total_len = 0;
        for (std::int64_t c = 0; c < count; ++c) {
            lengths.push_back(rng.next_int(5, 50));
            total_len += lengths.back();
        }
        Time slack = horizon - total_len - (count - 1);
        if (slack < 1) slack = count;  // widen past the nominal horizon
        std::vector<Time> offsets;
        for (std::int64_t c = 0; c < count; ++c) offsets.push_back(rng.next_int(0, slack));
        std::sort(offsets.begin(), offsets.end());
        Calendar cal;
        Time consumed = 0;
        for (std::size_t c = 0; c < lengths.size(); ++c) {
            const Time start = offsets[c] + consumed + static_cast<Time>(c);
            cal.push_back({start, start + lengths[c]});
            consumed += lengths[c];
        }
        inst.calendars[static_cast<std::size_t>(k)] = normalize_periods(std::move(cal));
    }

    // Fixed starting times: valid starts, non-overlapping per machine.
    for (OpId i : fixed_ops) {
        const auto& op = inst.operations[static_cast<std::size_t>(i)];
        const MachineId k = op.machines[0].machine;
        const Calendar& cal = inst.calendar(k);
        bool placed = false;
        for (int attempt = 0; attempt < 10 && !placed; ++attempt) {
            Time s = rng.next_int(0, std::max<Time>(1, horizon / 2));
            for (const Period& per : cal)
                if (s >= per.start && s < per.end) s = per.end;
            const Time c = completion_time(cal, s, op.machines[0].processing).first;
            bool clash = false;
            for (const auto& f : inst.fixed) {
                if (f.machine != k) continue;
                const Time fc = completion_time(
                    cal, f.start,
                    inst.operations[static_cast<std::size_t>(f.op)].machines[0].processing).first;
                if (s < fc && f.start < c) clash = true;
            }
            if (!clash) {
                inst.fixed.push_back({i, k, s});
                placed = true;
            }
        }
    }
    std::sort(inst.fixed.begin(), inst.fixed.end(),
              [](const FixedAssignment& a, const FixedAssignment& b) { return a.op < b.op; });

    return inst;
}

}  // namespace ops
