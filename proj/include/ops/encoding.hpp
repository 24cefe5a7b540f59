#pragma once

// Random-key representation of a solution.  A genotype is 2*obar reals in
// [0,1): the first obar entries choose machines for the non-fixed
// operations (ascending id order), the second obar entries induce the
// execution order.  Decoding is total; re-encoding maps any feasible
// (assignment, machine sequences) pair back to a genotype that decodes to
// exactly the same configuration.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ops/instance.hpp"

namespace ops {

struct Encoded {
    std::vector<double> keys;  // length 2*obar

    std::size_t obar() const { return keys.size() / 2; }
    double machine_key(std::size_t j) const { return keys[j]; }            // j in 0..obar-1
    double order_key(std::size_t j) const { return keys[obar() + j]; }
    void set_machine_key(std::size_t j, double v) { keys[j] = v; }
    void set_order_key(std::size_t j, double v) { keys[obar() + j] = v; }
};

/// Ascending-id indexing of the non-fixed operations.
struct NonFixedIndex {
    std::vector<OpId> ops;              // j -> op id
    std::vector<std::int32_t> index_of;  // op id -> j, or -1 for fixed ops

    explicit NonFixedIndex(const Instance& inst)
        : ops(inst.non_fixed_ops()), index_of(static_cast<std::size_t>(inst.num_ops()) + 1, -1) {
        for (std::size_t j = 0; j < ops.size(); ++j)
            index_of[static_cast<std::size_t>(ops[j])] = static_cast<std::int32_t>(j);
    }

    std::size_t obar() const { return ops.size(); }
    bool is_encoded(OpId i) const { return index_of[static_cast<std::size_t>(i)] >= 0; }
};

struct Assignment {
    std::vector<MachineId> kappa;     // op id -> machine (index 0 unused)
    std::vector<std::int32_t> pi;     // j -> 1-based index into the sorted eligible set
};

struct SequenceOrder {
    std::vector<OpId> sigma;              // non-fixed ops in execution order
    std::vector<std::vector<OpId>> phi;   // per machine (index 0 unused), non-fixed only
};

/// Machine choice per Eq-style bucketing: bucket = floor(key * |F| + 1).
inline Assignment decode_assignment(const Encoded& x, const Instance& inst) {
    const NonFixedIndex nf(inst);
    assert(x.obar() == nf.obar());
    Assignment asg;
    asg.kappa.assign(static_cast<std::size_t>(inst.num_ops()) + 1, 0);
    asg.pi.assign(nf.obar(), 1);
    for (std::size_t j = 0; j < nf.obar(); ++j) {
        const auto& options = inst.op(nf.ops[j]).machines;
        const auto count = static_cast<double>(options.size());
        auto bucket = static_cast<std::int64_t>(std::floor(x.machine_key(j) * count + 1.0));
        bucket = std::clamp<std::int64_t>(bucket, 1, static_cast<std::int64_t>(options.size()));
        asg.pi[j] = static_cast<std::int32_t>(bucket);
        asg.kappa[static_cast<std::size_t>(nf.ops[j])] = options[static_cast<std::size_t>(bucket - 1)].machine;
    }
    for (const auto& f : inst.fixed) asg.kappa[static_cast<std::size_t>(f.op)] = f.machine;
    return asg;
}

/// Eligible-set sequencing: repeatedly take the ready non-fixed operation
/// (all DAG predecessors fixed or already sequenced) with the smallest
/// order key, ties by smallest id.
inline SequenceOrder decode_sequence(const Encoded& x, const Assignment& asg, const Instance& inst) {
    const NonFixedIndex nf(inst);
    assert(x.obar() == nf.obar());
    const OpId o = inst.num_ops();

    std::vector<std::int32_t> pending(static_cast<std::size_t>(o) + 1, 0);
    for (OpId i : nf.ops)
        for (OpId p : inst.dag.predecessors(i))
            if (nf.is_encoded(p)) pending[static_cast<std::size_t>(i)]++;

    using Entry = std::pair<double, OpId>;  // (order key, id)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    for (OpId i : nf.ops)
        if (pending[static_cast<std::size_t>(i)] == 0)
            ready.emplace(x.order_key(static_cast<std::size_t>(nf.index_of[static_cast<std::size_t>(i)])), i);

    SequenceOrder seq;
    seq.sigma.reserve(nf.obar());
    seq.phi.assign(static_cast<std::size_t>(inst.num_machines) + 1, {});
    while (!ready.empty()) {
        const OpId i = ready.top().second;
        ready.pop();
        seq.sigma.push_back(i);
        seq.phi[static_cast<std::size_t>(asg.kappa[static_cast<std::size_t>(i)])].push_back(i);
        for (OpId s : inst.dag.successors(i)) {
            if (!nf.is_encoded(s)) continue;
            if (--pending[static_cast<std::size_t>(s)] == 0)
                ready.emplace(x.order_key(static_cast<std::size_t>(nf.index_of[static_cast<std::size_t>(s)])), s);
        }
    }
    assert(seq.sigma.size() == nf.obar());
    return seq;
}

/// Genotype whose decode reproduces the given assignment and total order.
/// Machine keys take bucket midpoints; order keys are rank/obar.
inline Encoded reencode_from_order(const Assignment& asg, const std::vector<OpId>& total_order,
                                   const Instance& inst) {
    const NonFixedIndex nf(inst);
    Encoded x;
    x.keys.assign(2 * nf.obar(), 0.0);
    for (std::size_t j = 0; j < nf.obar(); ++j) {
        const auto size = static_cast<double>(inst.op(nf.ops[j]).machines.size());
        x.set_machine_key(j, (static_cast<double>(asg.pi[j]) - 0.5) / size);
    }
    assert(total_order.size() == nf.obar());
    for (std::size_t rank = 0; rank < total_order.size(); ++rank) {
        const auto j = nf.index_of[static_cast<std::size_t>(total_order[rank])];
        assert(j >= 0);
        x.set_order_key(static_cast<std::size_t>(j),
                        static_cast<double>(rank) / static_cast<double>(nf.obar()));
    }
    return x;
}

/// Merge per-machine sequences (non-fixed ops only) and the precedence DAG
/// into one total order, then re-encode.  Throws if the combined relation
/// is cyclic.
inline Encoded reencode(const std::vector<std::vector<OpId>>& phi, const Assignment& asg,
                        const Instance& inst) {
    const NonFixedIndex nf(inst);
    const OpId o = inst.num_ops();
    std::vector<std::int32_t> pending(static_cast<std::size_t>(o) + 1, 0);
    std::vector<std::vector<OpId>> extra_succ(static_cast<std::size_t>(o) + 1);

    for (OpId i : nf.ops)
        for (OpId p : inst.dag.predecessors(i))
            if (nf.is_encoded(p)) pending[static_cast<std::size_t>(i)]++;
    for (const auto& seq : phi)
        for (std::size_t idx = 1; idx < seq.size(); ++idx) {
            extra_succ[static_cast<std::size_t>(seq[idx - 1])].push_back(seq[idx]);
            pending[static_cast<std::size_t>(seq[idx])]++;
        }

    std::priority_queue<OpId, std::vector<OpId>, std::greater<>> ready;
    for (OpId i : nf.ops)
        if (pending[static_cast<std::size_t>(i)] == 0) ready.push(i);

    std::vector<OpId> order;
    order.reserve(nf.obar());
    while (!ready.empty()) {
        const OpId i = ready.top();
        ready.pop();
        order.push_back(i);
        auto relax = [&](OpId s) {
            if (nf.is_encoded(s) && --pending[static_cast<std::size_t>(s)] == 0) ready.push(s);
        };
        for (OpId s : inst.dag.successors(i)) relax(s);
        for (OpId s : extra_succ[static_cast<std::size_t>(i)]) relax(s);
    }
    if (order.size() != nf.obar())
        throw std::invalid_argument("reencode: machine sequences conflict with the precedence DAG");
    return reencode_from_order(asg, order, inst);
}

}  // namespace ops
