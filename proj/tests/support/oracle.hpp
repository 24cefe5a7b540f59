#pragma once

// Brute-force reference decoder for small instances.  Independent of the
// library's calendar arithmetic and placement logic: completion times walk
// the timeline one unit cell at a time, and each operation's start is found
// by trying every integer from 0 upward and accepting the first one that
// satisfies the model constraints directly.

#include <cassert>
#include <stdexcept>
#include <vector>

#include "ops/encoding.hpp"
#include "ops/instance.hpp"

namespace ops::test {

struct OracleSchedule {
    std::vector<Time> start, completion, partial_completion, downtime;
    Time makespan = 0;
};

namespace oracle_detail {

inline bool cell_down(const Calendar& cal, Time t) {
    for (const Period& p : cal)
        if (t >= p.start && t < p.end) return true;
    return false;
}

inline bool start_ok(const Calendar& cal, Time s) {
    for (const Period& p : cal)
        if (s >= p.start && s < p.end) return false;
    return true;
}

inline bool setup_window_ok(const Calendar& cal, Time s, Time setup) {
    for (Time t = s - setup; t < s; ++t)  // cells (s-setup, s] as [t, t+1)
        if (cell_down(cal, t)) return false;
    return true;
}

/// March unit cells from s until `units` available ones are consumed.
inline Time walk_completion(const Calendar& cal, Time s, Time units) {
    Time t = s, done = 0;
    while (done < units) {
        if (!cell_down(cal, t)) ++done;
        ++t;
    }
    return t;
}

inline Time ceil_theta(const Rational& theta, Time p) {
    return (theta.num * p + theta.den - 1) / theta.den;
}

}  // namespace oracle_detail

inline OracleSchedule oracle_decode(const Instance& inst, const Assignment& asg,
                                    const SequenceOrder& seq) {
    using namespace oracle_detail;
    const OpId o = inst.num_ops();
    OracleSchedule out;
    out.start.assign(static_cast<std::size_t>(o) + 1, 0);
    out.completion.assign(static_cast<std::size_t>(o) + 1, 0);
    out.partial_completion.assign(static_cast<std::size_t>(o) + 1, 0);
    out.downtime.assign(static_cast<std::size_t>(o) + 1, 0);

    std::vector<char> placed(static_cast<std::size_t>(o) + 1, 0);
    std::vector<std::vector<OpId>> fixed_on(static_cast<std::size_t>(inst.num_machines) + 1);

    for (const auto& f : inst.fixed) {
        const Calendar& cal = inst.calendar(f.machine);
        const auto& op = inst.op(f.op);
        const Time p = op.processing_on(f.machine);
        const std::size_t ui = static_cast<std::size_t>(f.op);
        out.start[ui] = f.start;
        out.completion[ui] = walk_completion(cal, f.start, p);
        out.partial_completion[ui] = walk_completion(cal, f.start, ceil_theta(op.theta, p));
        out.downtime[ui] = out.completion[ui] - f.start - p;
        fixed_on[static_cast<std::size_t>(f.machine)].push_back(f.op);
    }

    // Generous upper bound on any start the greedy scan can need.
    Time bound = 100;
    for (OpId i = 1; i <= o; ++i) {
        Time pmax = 0;
        for (const auto& mo : inst.op(i).machines) pmax = std::max(pmax, mo.processing);
        bound += pmax + 64 + inst.op(i).release;
    }
    for (const auto& cal : inst.calendars)
        for (const Period& p : cal) bound += p.end - p.start;
    for (const auto& f : inst.fixed) bound += out.completion[static_cast<std::size_t>(f.op)];

    std::vector<std::vector<OpId>> placed_on(static_cast<std::size_t>(inst.num_machines) + 1);

    for (OpId i : seq.sigma) {
        const MachineId k = asg.kappa[static_cast<std::size_t>(i)];
        const Calendar& cal = inst.calendar(k);
        const auto& op = inst.op(i);
        const Time p = op.processing_on(k);
        const std::size_t ui = static_cast<std::size_t>(i);

        bool found = false;
        for (Time s = 0; s <= bound && !found; ++s) {
            if (s < op.release) continue;
            bool ok = start_ok(cal, s);
            for (OpId j : inst.dag.predecessors(i))
                ok = ok && s >= out.partial_completion[static_cast<std::size_t>(j)];
            // The scan follows the execution order: never before an already
            // placed operation of the machine.
            for (OpId j : placed_on[static_cast<std::size_t>(k)])
                ok = ok && s >= out.completion[static_cast<std::size_t>(j)];
            for (OpId f : fixed_on[static_cast<std::size_t>(k)])
                if (placed[static_cast<std::size_t>(f)])
                    ok = ok && s >= out.completion[static_cast<std::size_t>(f)];
            if (!ok) continue;

            // Immediately preceding block on the machine decides the setup.
            OpId pred = 0;
            Time pred_start = -1;
            auto consider = [&](OpId j) {
                const Time sj = out.start[static_cast<std::size_t>(j)];
                if (sj <= s && sj > pred_start) {
                    pred = j;
                    pred_start = sj;
                }
            };
            for (OpId j : placed_on[static_cast<std::size_t>(k)]) consider(j);
            for (OpId f : fixed_on[static_cast<std::size_t>(k)]) consider(f);
            const Time setup = inst.setup.between(k, pred, i);
            const Time pred_completion = pred == 0 ? 0 : out.completion[static_cast<std::size_t>(pred)];
            if (s - setup < pred_completion) continue;
            if (s - setup < 0) continue;
            if (!setup_window_ok(cal, s, setup)) continue;

            const Time c = walk_completion(cal, s, p);
            bool c_ok = true;
            for (OpId j : inst.dag.predecessors(i))
                c_ok = c_ok && c >= out.completion[static_cast<std::size_t>(j)];
            if (!c_ok) continue;

            // The next fixed block must leave room for this operation plus
            // its own setup.
            bool blocked = false;
            for (OpId f : fixed_on[static_cast<std::size_t>(k)]) {
                if (placed[static_cast<std::size_t>(f)]) continue;
                const Time sf = out.start[static_cast<std::size_t>(f)];
                if (sf > s && sf < c + inst.setup.between(k, i, f)) blocked = true;
            }
            if (blocked) continue;

            out.start[ui] = s;
            out.completion[ui] = c;
            out.partial_completion[ui] = walk_completion(cal, s, ceil_theta(op.theta, p));
            out.downtime[ui] = c - s - p;
            found = true;
        }
        if (!found) throw std::logic_error("oracle: no feasible start below the scan bound");

        placed[ui] = 1;
        placed_on[static_cast<std::size_t>(k)].push_back(i);
        for (OpId f : fixed_on[static_cast<std::size_t>(k)])
            if (!placed[static_cast<std::size_t>(f)] &&
                out.start[static_cast<std::size_t>(f)] <= out.start[ui])
                placed[static_cast<std::size_t>(f)] = 1;
    }

    Time makespan = 0;
    for (OpId i = 1; i <= o; ++i)
        makespan = std::max(makespan, out.completion[static_cast<std::size_t>(i)]);
    out.makespan = makespan;
    return out;
}

}  // namespace ops::test
