#pragma once

// Reallocation neighborhood and steepest-descent local search.  A move
// removes one critical non-fixed operation and reinserts it at another
// position of any eligible machine.  Two index sets over the target
// machine's sequence bound the insertion window that keeps the solution
// digraph acyclic; a constant-time formula estimates each neighbor's
// makespan and only the most promising neighbor is decoded per iteration.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ops/decoder.hpp"
#include "ops/encoding.hpp"
#include "ops/instance.hpp"
#include "ops/solution_graph.hpp"

namespace ops {

struct Budget {
    std::optional<double> seconds;
    std::optional<std::uint64_t> iterations;
    std::optional<Time> target_makespan;  // stop as soon as best <= target
};

class BudgetClock {
public:
    explicit BudgetClock(const Budget& b = {})
        : start_(std::chrono::steady_clock::now()), budget_(b) {}

    bool time_up() const {
        return budget_.seconds &&
               elapsed_seconds() >= *budget_.seconds;
    }
    double elapsed_seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    double seconds_limit_or(double fallback) const { return budget_.seconds.value_or(fallback); }

    void count_unit() { ++units_; }
    std::uint64_t units() const { return units_; }
    bool units_up() const { return budget_.iterations && units_ >= *budget_.iterations; }
    bool wall_mode() const { return !budget_.iterations.has_value(); }

    bool reached(Time best) const {
        return budget_.target_makespan && best <= *budget_.target_makespan;
    }
    bool exhausted(Time best) const { return time_up() || units_up() || reached(best); }

private:
    std::chrono::steady_clock::time_point start_;
    Budget budget_;
    std::uint64_t units_ = 0;
};

struct Move {
    OpId op = 0;
    MachineId machine = 0;
    std::int32_t position = 0;  // insertion slot in the target sequence (op removed)
    Time estimate = 0;
};

/// Feasibility data for reallocating `op` into machine k.  `sequence` is the
/// machine's current order (fixed ops included) with `op` removed.
struct CandidateSets {
    std::vector<OpId> sequence;
    std::vector<char> in_right;   // must stay right of the reinserted op
    std::vector<char> in_left;    // must stay left of the reinserted op
    Time partial_ub = 0;          // min successor start; bounds the op's overlap instant
    bool partial_ub_finite = false;
};

inline CandidateSets candidate_sets(OpId op, MachineId k, const Instance& inst,
                                    const Schedule& sched, const TailTimes& tails) {
    CandidateSets sets;
    for (OpId j : sched.machine_sequences[static_cast<std::size_t>(k)])
        if (j != op) sets.sequence.push_back(j);

    Time ub = std::numeric_limits<Time>::max();
    bool finite = false;
    for (OpId j : inst.dag.successors(op)) {
        ub = std::min(ub, sched.start[static_cast<std::size_t>(j)]);
        finite = true;
    }
    sets.partial_ub = ub;
    sets.partial_ub_finite = finite;

    const Time start_lb = sched.start_lb[static_cast<std::size_t>(op)];
    sets.in_right.resize(sets.sequence.size());
    sets.in_left.resize(sets.sequence.size());
    for (std::size_t idx = 0; idx < sets.sequence.size(); ++idx) {
        const std::size_t uj = static_cast<std::size_t>(sets.sequence[idx]);
        sets.in_right[idx] = sched.partial_completion[uj] > start_lb;
        // With no successors the left threshold is -inf: every member qualifies.
        sets.in_left[idx] =
            !finite || tails.tail[uj] + sched.downtime[uj] + sched.processing[uj] >
                           sched.makespan - ub;
    }
    return sets;
}

/// Insertion slots keeping every left-only member before the op and every
/// right-only member after it.  Members in both sets may fall on either side.
inline std::vector<std::int32_t> feasible_positions(const CandidateSets& sets) {
    std::int32_t lo = 0;
    auto hi = static_cast<std::int32_t>(sets.sequence.size());
    for (std::size_t idx = 0; idx < sets.sequence.size(); ++idx) {
        if (sets.in_left[idx] && !sets.in_right[idx])
            lo = std::max(lo, static_cast<std::int32_t>(idx) + 1);
        if (sets.in_right[idx] && !sets.in_left[idx])
            hi = std::min(hi, static_cast<std::int32_t>(idx));
    }
    std::vector<std::int32_t> positions;
    for (std::int32_t p = lo; p <= hi; ++p) positions.push_back(p);
    return positions;
}

/// Estimated makespan of the neighbor that inserts `op` at `position`:
/// the length of a sink-to-source path through the reinserted operation,
/// pieced together from the overlap-window members around the slot.
inline Time estimate_makespan(OpId op, MachineId k, std::int32_t position,
                              const CandidateSets& sets, const Instance& inst,
                              const Schedule& sched, const TailTimes& tails) {
    const Time p_target = inst.op(op).processing_on(k);
    const Time start_lb = sched.start_lb[static_cast<std::size_t>(op)];
    const Time right_gap =
        sets.partial_ub_finite ? sched.makespan - sets.partial_ub : 0;  // clamped at 0 via sentinel

    std::vector<std::size_t> window;  // indices of members in both sets, in sequence order
    for (std::size_t idx = 0; idx < sets.sequence.size(); ++idx)
        if (sets.in_left[idx] && sets.in_right[idx]) window.push_back(idx);

    if (window.empty()) return start_lb + p_target + right_gap;

    std::size_t before = 0;  // window members left of the insertion slot
    while (before < window.size() &&
           static_cast<std::int32_t>(window[before]) < position)
        ++before;

    auto member = [&](std::size_t w) -> std::size_t {
        return static_cast<std::size_t>(sets.sequence[window[w]]);
    };
    auto busy = [&](std::size_t uj) { return sched.processing[uj] + sched.downtime[uj]; };

    if (before == 0) {
        const std::size_t uj = member(0);
        return p_target + start_lb + busy(uj) + tails.tail[uj];
    }
    if (before < window.size()) {
        const std::size_t uj = member(before - 1);
        const std::size_t un = member(before);
        return p_target + sched.start[uj] + busy(uj) + busy(un) + tails.tail[un];
    }
    const std::size_t uj = member(window.size() - 1);
    return p_target + sched.start[uj] + busy(uj) + right_gap;
}

/// All feasible moves of the critical operations, in deterministic scan
/// order: critical-path order, machines ascending, positions left to right.
/// Fixed operations are never moved and the identity reinsertion is skipped.
inline std::vector<Move> neighborhood(const Instance& inst, const Schedule& sched,
                                      const SolutionDigraph& g, const TailTimes& tails) {
    std::vector<Move> moves;
    const std::vector<OpId> path = critical_path(g, tails);
    for (OpId i : path) {
        if (i == 0 || i == g.sink() || inst.is_fixed(i)) continue;
        const MachineId home = sched.machine_of[static_cast<std::size_t>(i)];

        // Identity slot in non-fixed coordinates on the home machine.
        std::int32_t home_rank = 0;
        for (OpId j : sched.machine_sequences[static_cast<std::size_t>(home)]) {
            if (j == i) break;
            if (!inst.is_fixed(j)) ++home_rank;
        }

        for (const auto& option : inst.op(i).machines) {
            const MachineId k = option.machine;
            const CandidateSets sets = candidate_sets(i, k, inst, sched, tails);
            for (std::int32_t p : feasible_positions(sets)) {
                if (k == home) {
                    std::int32_t rank = 0;
                    for (std::int32_t idx = 0; idx < p; ++idx)
                        if (!inst.is_fixed(sets.sequence[static_cast<std::size_t>(idx)])) ++rank;
                    if (rank == home_rank) continue;  // decodes to the current schedule
                }
                moves.push_back({i, k, p, estimate_makespan(i, k, p, sets, inst, sched, tails)});
            }
        }
    }
    return moves;
}

/// Rebuild the genotype and schedule for one move: drop fixed ops from the
/// machine sequences, reinsert the moved op, re-encode and decode.
inline std::pair<Encoded, Schedule> apply_move(const Instance& inst, const Schedule& sched,
                                               const Move& move) {
    const std::size_t machines = sched.machine_sequences.size();
    std::vector<std::vector<OpId>> phi(machines);
    for (std::size_t k = 1; k < machines; ++k)
        for (OpId j : sched.machine_sequences[k])
            if (!inst.is_fixed(j) && j != move.op) phi[k].push_back(j);

    // Map the slot from fixed-included coordinates to the non-fixed sequence.
    std::int32_t rank = 0, seen = 0;
    for (OpId j : sched.machine_sequences[static_cast<std::size_t>(move.machine)]) {
        if (j == move.op) continue;
        if (seen >= move.position) break;
        ++seen;
        if (!inst.is_fixed(j)) ++rank;
    }
    auto& target = phi[static_cast<std::size_t>(move.machine)];
    target.insert(target.begin() + rank, move.op);

    const NonFixedIndex nf(inst);
    Assignment asg;
    asg.kappa = sched.machine_of;
    asg.kappa[static_cast<std::size_t>(move.op)] = move.machine;
    asg.pi.assign(nf.obar(), 1);
    for (std::size_t j = 0; j < nf.obar(); ++j) {
        const auto& options = inst.op(nf.ops[j]).machines;
        for (std::size_t idx = 0; idx < options.size(); ++idx)
            if (options[idx].machine == asg.kappa[static_cast<std::size_t>(nf.ops[j])])
                asg.pi[j] = static_cast<std::int32_t>(idx) + 1;
    }

    Encoded x = reencode(phi, asg, inst);
    const Assignment decoded_asg = decode_assignment(x, inst);
    const SequenceOrder seq = decode_sequence(x, decoded_asg, inst);
    return {std::move(x), build_schedule(inst, decoded_asg, seq)};
}

struct LocalSearchStep {
    Move move;
    Time actual = 0;
    bool accepted = false;
};

struct LocalSearchResult {
    Encoded x;
    Schedule schedule;
};

/// Steepest descent on estimates: decode the single best-estimate neighbor
/// per iteration and accept only strict improvement.
inline LocalSearchResult local_search(const Encoded& x, const Instance& inst,
                                      const BudgetClock* clock = nullptr,
                                      std::vector<LocalSearchStep>* trace = nullptr) {
    LocalSearchResult cur{x, decode(x, inst)};
    for (;;) {
        if (clock && clock->time_up()) return cur;
        const SolutionDigraph g = build_digraph(inst, cur.schedule);
        const TailTimes tails = tail_times(g);
        const std::vector<Move> moves = neighborhood(inst, cur.schedule, g, tails);
        if (moves.empty()) return cur;
        const Move* best = &moves.front();
        for (const Move& m : moves)
            if (m.estimate < best->estimate) best = &m;
        auto [nx, nsched] = apply_move(inst, cur.schedule, *best);
        const bool accepted = nsched.makespan < cur.schedule.makespan;
        if (trace) trace->push_back({*best, nsched.makespan, accepted});
        if (!accepted) return cur;
        cur.x = std::move(nx);
        cur.schedule = std::move(nsched);
    }
}

}  // namespace ops
