#pragma once

// Exhaustive search over every machine assignment and every linear
// extension of the non-fixed precedence graph, decoding each combination.
// Only usable at micro scale.

#include <functional>
#include <limits>

#include "ops/decoder.hpp"
#include "ops/encoding.hpp"
#include "ops/instance.hpp"

namespace ops::test {

struct EnumerationResult {
    Time optimum = std::numeric_limits<Time>::max();
    Assignment best_assignment;
    std::vector<OpId> best_order;
    std::uint64_t decodes = 0;
};

/// Visit every (assignment, order) pair; `visit` may be null.
inline EnumerationResult enumerate_all(
    const Instance& inst,
    const std::function<void(const Instance&, const Schedule&)>& visit = nullptr) {
    const NonFixedIndex nf(inst);
    EnumerationResult out;

    std::vector<OpId> order;
    std::vector<char> used(static_cast<std::size_t>(inst.num_ops()) + 1, 0);
    std::vector<std::size_t> choice(nf.obar(), 0);

    auto decode_current = [&]() {
        Assignment asg;
        asg.kappa.assign(static_cast<std::size_t>(inst.num_ops()) + 1, 0);
        asg.pi.assign(nf.obar(), 1);
        for (std::size_t j = 0; j < nf.obar(); ++j) {
            asg.pi[j] = static_cast<std::int32_t>(choice[j]) + 1;
            asg.kappa[static_cast<std::size_t>(nf.ops[j])] =
                inst.op(nf.ops[j]).machines[choice[j]].machine;
        }
        for (const auto& f : inst.fixed) asg.kappa[static_cast<std::size_t>(f.op)] = f.machine;
        SequenceOrder seq;
        seq.sigma = order;
        seq.phi.assign(static_cast<std::size_t>(inst.num_machines) + 1, {});
        for (OpId i : order)
            seq.phi[static_cast<std::size_t>(asg.kappa[static_cast<std::size_t>(i)])].push_back(i);
        const Schedule sched = build_schedule(inst, asg, seq);
        ++out.decodes;
        if (visit) visit(inst, sched);
        if (sched.makespan < out.optimum) {
            out.optimum = sched.makespan;
            out.best_assignment = asg;
            out.best_order = order;
        }
    };

    std::function<void(std::size_t)> assignments = [&](std::size_t j) {
        if (j == nf.obar()) {
            decode_current();
            return;
        }
        for (std::size_t c = 0; c < inst.op(nf.ops[j]).machines.size(); ++c) {
            choice[j] = c;
            assignments(j + 1);
        }
    };
    std::function<void()> extensions = [&]() {
        if (order.size() == nf.obar()) {
            assignments(0);
            return;
        }
        for (OpId i : nf.ops) {
            if (used[static_cast<std::size_t>(i)]) continue;
            bool ready = true;
            for (OpId p : inst.dag.predecessors(i))
                if (nf.is_encoded(p) && !used[static_cast<std::size_t>(p)]) ready = false;
            if (!ready) continue;
            used[static_cast<std::size_t>(i)] = 1;
            order.push_back(i);
            extensions();
            order.pop_back();
            used[static_cast<std::size_t>(i)] = 0;
        }
    };
    extensions();
    return out;
}

}  // namespace ops::test
