#pragma once

// Schedule construction.  Given a machine assignment and an execution order
// of the non-fixed operations, builds the semi-active schedule: every
// operation is placed as early as the precedence bounds, release time,
// machine sequence, setup window and downtime calendar allow.  Fixed
// operations keep their given start and are woven into the machine
// sequences either when they block a non-fixed placement or, if untouched,
// at the end by start time.

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ops/calendar.hpp"
#include "ops/encoding.hpp"
#include "ops/instance.hpp"

namespace ops {

struct Schedule {
    OpId num_ops = 0;
    std::vector<MachineId> machine_of;       // op -> machine (index 0 unused)
    std::vector<Time> start;                 // s
    std::vector<Time> completion;            // c
    std::vector<Time> partial_completion;    // instant the overlap share is done
    std::vector<Time> downtime;              // machine downtime inside [s, c]
    std::vector<Time> processing;            // p on the assigned machine
    std::vector<Time> partial_processing;    // ceil(theta * p)
    std::vector<Time> setup;                 // sequence-dependent setup length
    std::vector<Time> start_anchor;          // max(start_lb, completion(ant) + setup)
    std::vector<Time> delay;                 // accumulated completion-bound delay
    std::vector<Time> start_lb;              // precedence/release lower bound on start
    std::vector<Time> completion_lb;         // precedence lower bound on completion
    std::vector<std::vector<OpId>> machine_sequences;  // per machine, fixed ops included
    std::vector<std::int32_t> position;      // op -> index in its machine sequence
    std::vector<OpId> scheduling_order;      // order in which operations were placed
    Time makespan = 0;
    std::vector<OpId> tight_fixed_ops;       // fixed ops whose start precedes ant completion + setup

    OpId machine_predecessor(OpId i) const {
        const auto p = position[static_cast<std::size_t>(i)];
        return p == 0 ? 0
                      : machine_sequences[static_cast<std::size_t>(machine_of[static_cast<std::size_t>(i)])]
                            [static_cast<std::size_t>(p - 1)];
    }
    OpId machine_successor(OpId i) const {
        const auto& seq =
            machine_sequences[static_cast<std::size_t>(machine_of[static_cast<std::size_t>(i)])];
        const auto p = static_cast<std::size_t>(position[static_cast<std::size_t>(i)]);
        return p + 1 < seq.size() ? seq[p + 1] : num_ops + 1;
    }
};

namespace detail {

struct ScheduleBuilder {
    const Instance& inst;
    const Assignment& asg;
    Schedule sched;
    std::vector<std::vector<OpId>> waiting_fixed;  // per machine, unsequenced fixed ops by start

    ScheduleBuilder(const Instance& inst_, const Assignment& asg_) : inst(inst_), asg(asg_) {
        const auto o = static_cast<std::size_t>(inst.num_ops()) + 1;
        sched.num_ops = inst.num_ops();
        sched.machine_of = asg.kappa;
        sched.start.assign(o, 0);
        sched.completion.assign(o, 0);
        sched.partial_completion.assign(o, 0);
        sched.downtime.assign(o, 0);
        sched.processing.assign(o, 0);
        sched.partial_processing.assign(o, 0);
        sched.setup.assign(o, 0);
        sched.start_anchor.assign(o, 0);
        sched.delay.assign(o, 0);
        sched.start_lb.assign(o, 0);
        sched.completion_lb.assign(o, 0);
        sched.machine_sequences.assign(static_cast<std::size_t>(inst.num_machines) + 1, {});
        sched.position.assign(o, -1);
        sched.scheduling_order.reserve(o - 1);
        waiting_fixed.assign(static_cast<std::size_t>(inst.num_machines) + 1, {});

        // Fixed operations carry their timing from the instance data.
        for (const auto& f : inst.fixed) {
            const Calendar& cal = inst.calendar(f.machine);
            const auto& op = inst.op(f.op);
            const std::size_t ui = static_cast<std::size_t>(f.op);
            const Time p = op.processing_on(f.machine);
            const auto [c, u] = completion_time(cal, f.start, p);
            sched.start[ui] = f.start;
            sched.processing[ui] = p;
            sched.completion[ui] = c;
            sched.downtime[ui] = u;
            sched.partial_processing[ui] = op.theta.ceil_mul(p);
            sched.partial_completion[ui] = partial_completion(cal, f.start, sched.partial_processing[ui]);
            waiting_fixed[static_cast<std::size_t>(f.machine)].push_back(f.op);
        }
        for (auto& q : waiting_fixed)
            std::sort(q.begin(), q.end(), [&](OpId a, OpId b) {
                return sched.start[static_cast<std::size_t>(a)] < sched.start[static_cast<std::size_t>(b)];
            });
    }

    Time ant_completion(MachineId k) const {
        const auto& seq = sched.machine_sequences[static_cast<std::size_t>(k)];
        return seq.empty() ? 0 : sched.completion[static_cast<std::size_t>(seq.back())];
    }
    OpId ant_op(MachineId k) const {
        const auto& seq = sched.machine_sequences[static_cast<std::size_t>(k)];
        return seq.empty() ? 0 : seq.back();
    }

    void precedence_bounds(OpId i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        Time s_lb = inst.op(i).release;
        Time c_lb = 0;
        for (OpId j : inst.dag.predecessors(i)) {
            s_lb = std::max(s_lb, sched.partial_completion[static_cast<std::size_t>(j)]);
            c_lb = std::max(c_lb, sched.completion[static_cast<std::size_t>(j)]);
        }
        sched.start_lb[ui] = s_lb;
        sched.completion_lb[ui] = c_lb;
    }

    /// Sequence a fixed operation after the current tail of its machine.
    /// The given start stands even when the implied setup does not fit
    /// cleanly; such operations are flagged.
    void sequence_fixed(OpId f) {
        const std::size_t uf = static_cast<std::size_t>(f);
        const MachineId k = sched.machine_of[uf];
        const OpId ant = ant_op(k);
        precedence_bounds(f);
        sched.setup[uf] = inst.setup.between(k, ant, f);
        sched.start_anchor[uf] = std::max(sched.start_lb[uf], ant_completion(k) + sched.setup[uf]);
        if (ant_completion(k) + sched.setup[uf] > sched.start[uf] ||
            !setup_fits(inst.calendar(k), sched.start[uf], sched.setup[uf]))
            sched.tight_fixed_ops.push_back(f);
        auto& seq = sched.machine_sequences[static_cast<std::size_t>(k)];
        sched.position[uf] = static_cast<std::int32_t>(seq.size());
        seq.push_back(f);
        sched.scheduling_order.push_back(f);
        auto& queue = waiting_fixed[static_cast<std::size_t>(k)];
        queue.erase(std::find(queue.begin(), queue.end(), f));
    }

    void place(OpId i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const MachineId k = sched.machine_of[ui];
        const Calendar& cal = inst.calendar(k);
        const auto& op = inst.op(i);

        sched.processing[ui] = op.processing_on(k);
        sched.partial_processing[ui] = op.theta.ceil_mul(sched.processing[ui]);
        sched.delay[ui] = 0;
        precedence_bounds(i);

        const Time q_k = static_cast<Time>(cal.size());
        Time delay_rounds = 0;
        for (;;) {
            const OpId ant = ant_op(k);
            sched.setup[ui] = inst.setup.between(k, ant, i);
            sched.start_anchor[ui] = std::max(sched.start_lb[ui], ant_completion(k) + sched.setup[ui]);
            sched.start[ui] =
                earliest_start(cal, sched.start_anchor[ui] + sched.delay[ui], sched.setup[ui]);
            const auto [c, u] = completion_time(cal, sched.start[ui], sched.processing[ui]);
            sched.completion[ui] = c;
            sched.downtime[ui] = u;

            // A still-unsequenced fixed operation inside the chosen window
            // must be sequenced first; the placement is then redone.
            OpId blocking = 0;
            for (OpId f : waiting_fixed[static_cast<std::size_t>(k)]) {
                const Time s_f = sched.start[static_cast<std::size_t>(f)];
                if (s_f >= ant_completion(k) && s_f < c + inst.setup.between(k, i, f)) {
                    blocking = f;
                    break;  // queue is sorted by start
                }
            }
            if (blocking != 0) {
                sequence_fixed(blocking);
                continue;
            }

            if (c < sched.completion_lb[ui]) {
                sched.delay[ui] += compute_delay(cal, c, sched.completion_lb[ui]);
                if (++delay_rounds > q_k + 2)
                    throw std::logic_error("decoder: completion-bound delay failed to converge");
                continue;
            }
            break;
        }

        sched.partial_completion[ui] =
            partial_completion(cal, sched.start[ui], sched.partial_processing[ui]);
        auto& seq = sched.machine_sequences[static_cast<std::size_t>(k)];
        sched.position[ui] = static_cast<std::int32_t>(seq.size());
        seq.push_back(i);
        sched.scheduling_order.push_back(i);
    }

    Schedule finish() {
        Time makespan = 0;
        for (OpId i = 1; i <= inst.num_ops(); ++i)
            makespan = std::max(makespan, sched.completion[static_cast<std::size_t>(i)]);
        sched.makespan = makespan;

        // Leftover fixed operations, by start time.
        std::vector<OpId> leftover;
        for (const auto& q : waiting_fixed) leftover.insert(leftover.end(), q.begin(), q.end());
        std::sort(leftover.begin(), leftover.end(), [&](OpId a, OpId b) {
            const Time sa = sched.start[static_cast<std::size_t>(a)];
            const Time sb = sched.start[static_cast<std::size_t>(b)];
            return sa != sb ? sa < sb : a < b;
        });
        for (OpId f : leftover) sequence_fixed(f);
        return std::move(sched);
    }
};

}  // namespace detail

/// Decode (assignment, sequence) into a full schedule.
inline Schedule build_schedule(const Instance& inst, const Assignment& asg, const SequenceOrder& seq) {
    detail::ScheduleBuilder builder(inst, asg);
    for (OpId i : seq.sigma) builder.place(i);
    return builder.finish();
}

inline Schedule decode(const Encoded& x, const Instance& inst) {
    const Assignment asg = decode_assignment(x, inst);
    const SequenceOrder seq = decode_sequence(x, asg, inst);
    return build_schedule(inst, asg, seq);
}

/// Debug dump: one line per operation in scheduling order.
inline std::string schedule_to_csv(const Schedule& sched) {
    std::ostringstream out;
    out << "op,machine,setup_start,start,completion,partial_completion,downtime\n";
    for (OpId i : sched.scheduling_order) {
        const std::size_t ui = static_cast<std::size_t>(i);
        out << i << ',' << sched.machine_of[ui] << ',' << sched.start[ui] - sched.setup[ui] << ','
            << sched.start[ui] << ',' << sched.completion[ui] << ',' << sched.partial_completion[ui]
            << ',' << sched.downtime[ui] << '\n';
    }
    return out.str();
}

}  // namespace ops
