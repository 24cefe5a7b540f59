#pragma once

// Weighted augmented digraph of a schedule.  Nodes are 0..o+1 (source and
// sink virtual).  Arcs: the precedence DAG, the machine-consecutive pairs,
// and source/sink arcs.  Weights are chosen so the longest 0->i path weight
// equals the completion time of i, and the longest 0->(o+1) path equals the
// makespan.  Tail times (longest path to the sink) identify the critical
// operations the local search may reallocate.

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "ops/decoder.hpp"
#include "ops/instance.hpp"

namespace ops {

struct SolutionDigraph {
    OpId num_ops = 0;  // nodes 0..num_ops+1
    struct Arc {
        OpId to = 0;
        Time weight = 0;
    };
    std::vector<std::vector<Arc>> out;      // parallel arcs merged, larger weight kept
    std::vector<Time> node_weight;
    std::vector<OpId> machine_successor;    // op -> next op on its machine, o+1 if last
    std::vector<OpId> scheduling_order;     // preferred sweep order for tail times

    OpId sink() const { return num_ops + 1; }
};

struct TailTimes {
    std::vector<Time> tail;     // longest path weight from node to sink
    std::vector<OpId> next;     // arc target realizing the maximum
};

inline SolutionDigraph build_digraph(const Instance& inst, const Schedule& sched) {
    const OpId o = inst.num_ops();
    SolutionDigraph g;
    g.num_ops = o;
    g.out.assign(static_cast<std::size_t>(o) + 2, {});
    g.node_weight.assign(static_cast<std::size_t>(o) + 2, 0);
    g.machine_successor.assign(static_cast<std::size_t>(o) + 2, o + 1);
    g.scheduling_order = sched.scheduling_order;

    for (OpId i = 1; i <= o; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        g.node_weight[ui] = sched.start[ui] - sched.start_anchor[ui] + sched.downtime[ui] +
                            sched.processing[ui];
    }

    auto add_arc = [&](OpId from, OpId to, Time w) {
        for (auto& arc : g.out[static_cast<std::size_t>(from)]) {
            if (arc.to == to) {  // parallel arc: keep the larger weight
                arc.weight = std::max(arc.weight, w);
                return;
            }
        }
        g.out[static_cast<std::size_t>(from)].push_back({to, w});
    };

    for (OpId j = 1; j <= o; ++j)
        for (OpId i : inst.dag.successors(j))
            add_arc(j, i, sched.partial_completion[static_cast<std::size_t>(j)] -
                              sched.completion[static_cast<std::size_t>(j)]);

    for (const auto& seq : sched.machine_sequences) {
        for (std::size_t idx = 0; idx < seq.size(); ++idx) {
            const OpId i = seq[idx];
            const std::size_t ui = static_cast<std::size_t>(i);
            if (idx == 0) {
                add_arc(0, i, std::max(inst.op(i).release, sched.setup[ui]));
            } else {
                add_arc(seq[idx - 1], i, sched.setup[ui]);
                // A release bound can bind mid-sequence too; without this arc
                // the longest 0->i path would undershoot the completion time.
                if (inst.op(i).release > 0) add_arc(0, i, inst.op(i).release);
            }
            if (idx + 1 < seq.size())
                g.machine_successor[ui] = seq[idx + 1];
            else
                add_arc(i, o + 1, 0);
        }
    }
    return g;
}

namespace detail {

/// Topological order of the digraph preferring the scheduling order.  The
/// scheduling order itself can violate precedence arcs that point from a
/// late-sequenced fixed operation to an earlier-scheduled one, so ties are
/// broken by scheduling position inside a Kahn sweep.
inline std::vector<OpId> sweep_order(const SolutionDigraph& g) {
    const std::size_t n = static_cast<std::size_t>(g.num_ops) + 2;
    std::vector<std::int32_t> indeg(n, 0), priority(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& arc : g.out[v]) indeg[static_cast<std::size_t>(arc.to)]++;
    for (std::size_t idx = 0; idx < g.scheduling_order.size(); ++idx)
        priority[static_cast<std::size_t>(g.scheduling_order[idx])] = static_cast<std::int32_t>(idx) + 1;
    priority[static_cast<std::size_t>(g.num_ops) + 1] = static_cast<std::int32_t>(n);

    using Entry = std::pair<std::int32_t, OpId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.emplace(priority[v], static_cast<OpId>(v));
    std::vector<OpId> order;
    order.reserve(n);
    while (!ready.empty()) {
        const OpId v = ready.top().second;
        ready.pop();
        order.push_back(v);
        for (const auto& arc : g.out[static_cast<std::size_t>(v)])
            if (--indeg[static_cast<std::size_t>(arc.to)] == 0)
                ready.emplace(priority[static_cast<std::size_t>(arc.to)], arc.to);
    }
    assert(order.size() == n);
    return order;
}

}  // namespace detail

/// Longest 0->(o+1) path weight via forward DP (node weights count for every
/// node except the source).
inline Time longest_path_value(const SolutionDigraph& g) {
    const std::vector<OpId> order = detail::sweep_order(g);
    const std::size_t n = static_cast<std::size_t>(g.num_ops) + 2;
    constexpr Time kNegInf = std::numeric_limits<Time>::min() / 4;
    std::vector<Time> dist(n, kNegInf);
    dist[0] = 0;
    for (OpId v : order) {
        const std::size_t uv = static_cast<std::size_t>(v);
        if (dist[uv] == kNegInf) continue;
        for (const auto& arc : g.out[uv]) {
            const std::size_t ut = static_cast<std::size_t>(arc.to);
            dist[ut] = std::max(dist[ut], dist[uv] + arc.weight + g.node_weight[ut]);
        }
    }
    return dist[static_cast<std::size_t>(g.sink())];
}

/// Tail times: t[sink] = 0 and, sweeping nodes in reverse topological
/// order, t[i] = max over arcs (i,v) of t[v] + weight(v) + weight(i,v).
/// next[i] records the realizing target, preferring the machine successor
/// and then the smallest id.
inline TailTimes tail_times(const SolutionDigraph& g) {
    const std::vector<OpId> order = detail::sweep_order(g);
    const std::size_t n = static_cast<std::size_t>(g.num_ops) + 2;
    TailTimes tt;
    tt.tail.assign(n, 0);
    tt.next.assign(n, g.sink());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const OpId i = *it;
        const std::size_t ui = static_cast<std::size_t>(i);
        if (i == g.sink()) continue;
        Time best = std::numeric_limits<Time>::min();
        OpId best_to = g.sink();
        for (const auto& arc : g.out[ui]) {
            const std::size_t ut = static_cast<std::size_t>(arc.to);
            const Time value = tt.tail[ut] + g.node_weight[ut] + arc.weight;
            const bool better =
                value > best ||
                (value == best && (arc.to == g.machine_successor[ui] ||
                                   (best_to != g.machine_successor[ui] && arc.to < best_to)));
            if (better) {
                best = value;
                best_to = arc.to;
            }
        }
        if (g.out[ui].empty()) { best = 0; best_to = g.sink(); }  // isolated node
        tt.tail[ui] = best;
        tt.next[ui] = best_to;
    }
    return tt;
}

/// The longest path chased through next() pointers: 0, next(0), ..., o+1.
inline std::vector<OpId> critical_path(const SolutionDigraph& g, const TailTimes& tt) {
    std::vector<OpId> path{0};
    OpId v = 0;
    while (v != g.sink()) {
        v = tt.next[static_cast<std::size_t>(v)];
        path.push_back(v);
    }
    return path;
}

/// Debug dump: `node i w` and `arc u v w` lines.
inline std::string digraph_to_text(const SolutionDigraph& g) {
    std::ostringstream out;
    for (OpId i = 0; i <= g.sink(); ++i)
        out << "node " << i << ' ' << g.node_weight[static_cast<std::size_t>(i)] << '\n';
    for (OpId i = 0; i <= g.sink(); ++i)
        for (const auto& arc : g.out[static_cast<std::size_t>(i)])
            out << "arc " << i << ' ' << arc.to << ' ' << arc.weight << '\n';
    return out.str();
}

}  // namespace ops
