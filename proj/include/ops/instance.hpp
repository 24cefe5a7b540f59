#pragma once

// Problem data for the online-printing-shop scheduling model: jobs split
// into operations with DAG precedence, eligible machines with per-machine
// processing times, release times, overlap coefficients, machine downtime
// calendars, sequence-dependent setup tables, and fixed operations.
// Instances are immutable once built and safe to share across threads.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ops/calendar.hpp"
#include "ops/rational.hpp"

namespace ops {

using OpId = std::int32_t;
using MachineId = std::int32_t;

struct MachineOption {
    MachineId machine = 0;
    Time processing = 0;
};

struct OperationSpec {
    OpId id = 0;
    std::int32_t job = 0;
    std::vector<MachineOption> machines;  // sorted by machine id
    Time release = 0;
    Rational theta{1, 1};

    bool eligible(MachineId k) const {
        for (const auto& mo : machines)
            if (mo.machine == k) return true;
        return false;
    }

    Time processing_on(MachineId k) const {
        for (const auto& mo : machines)
            if (mo.machine == k) return mo.processing;
        throw std::out_of_range("operation " + std::to_string(id) +
                                " not eligible on machine " + std::to_string(k));
    }
};

struct FixedAssignment {
    OpId op = 0;
    MachineId machine = 0;
    Time start = 0;
};

/// Sparse setup-time table: value 0 unless stated.  Row 0 holds the setups
/// of the first operation processed on a machine.
class SetupTable {
public:
    void set_initial(MachineId k, OpId to, Time value) {
        if (value != 0) initial_[key(k, to)] = value;
    }
    void set(MachineId k, OpId from, OpId to, Time value) {
        if (value != 0) between_[key3(k, from, to)] = value;
    }

    Time initial(MachineId k, OpId to) const {
        auto it = initial_.find(key(k, to));
        return it == initial_.end() ? 0 : it->second;
    }
    /// Setup of `to` when processed right after `from` on machine k.
    /// from == 0 selects the initial-setup row.
    Time between(MachineId k, OpId from, OpId to) const {
        if (from == 0) return initial(k, to);
        auto it = between_.find(key3(k, from, to));
        return it == between_.end() ? 0 : it->second;
    }

    template <typename F>
    void for_each_initial(F&& f) const {
        for (const auto& [k, v] : initial_)
            f(static_cast<MachineId>(k >> 32), static_cast<OpId>(k & 0xFFFFFFFF), v);
    }
    template <typename F>
    void for_each_between(F&& f) const {
        for (const auto& [k, v] : between_)
            f(static_cast<MachineId>(k >> 42), static_cast<OpId>((k >> 21) & 0x1FFFFF),
              static_cast<OpId>(k & 0x1FFFFF), v);
    }

private:
    static std::uint64_t key(MachineId k, OpId to) {
        return (static_cast<std::uint64_t>(k) << 32) | static_cast<std::uint32_t>(to);
    }
    static std::uint64_t key3(MachineId k, OpId from, OpId to) {
        return (static_cast<std::uint64_t>(k) << 42) |
               (static_cast<std::uint64_t>(from) << 21) | static_cast<std::uint64_t>(to);
    }
    std::unordered_map<std::uint64_t, Time> initial_;
    std::unordered_map<std::uint64_t, Time> between_;
};

/// Precedence DAG over operations 1..o with successor/predecessor adjacency
/// and reachability queries.  Reachability uses precomputed descendant
/// bitsets for small graphs and plain DFS beyond that.
class PrecedenceDag {
public:
    static constexpr OpId kBitsetLimit = 4096;

    PrecedenceDag() = default;
    PrecedenceDag(OpId num_ops, const std::vector<std::pair<OpId, OpId>>& arcs)
        : n_(num_ops), succ_(num_ops + 1), pred_(num_ops + 1) {
        for (const auto& [a, b] : arcs) {
            if (a < 1 || a > n_ || b < 1 || b > n_)
                throw std::out_of_range("arc endpoint out of range");
            succ_[a].push_back(b);
            pred_[b].push_back(a);
        }
        topo_ = compute_topo_order();
        if (static_cast<OpId>(topo_.size()) == n_ && n_ <= kBitsetLimit)
            build_descendants();
    }

    OpId num_ops() const { return n_; }
    bool acyclic() const { return static_cast<OpId>(topo_.size()) == n_; }
    const std::vector<OpId>& successors(OpId i) const { return succ_.at(i); }
    const std::vector<OpId>& predecessors(OpId i) const { return pred_.at(i); }
    const std::vector<OpId>& topo_order() const { return topo_; }
    std::size_t num_arcs() const {
        std::size_t c = 0;
        for (const auto& s : succ_) c += s.size();
        return c;
    }

    /// True iff b is reachable from a through one or more arcs.
    bool has_path(OpId a, OpId b) const {
        if (a < 1 || a > n_ || b < 1 || b > n_)
            throw std::out_of_range("has_path: id out of range");
        if (a == b) return false;
        if (!desc_.empty()) {
            const std::size_t ub = static_cast<std::size_t>(b);
            return (desc_[static_cast<std::size_t>(a)][ub >> 6] >> (ub & 63)) & 1;
        }
        std::vector<char> seen(n_ + 1, 0);
        std::vector<OpId> stack{a};
        seen[a] = 1;
        while (!stack.empty()) {
            const OpId v = stack.back();
            stack.pop_back();
            for (OpId w : succ_[v]) {
                if (w == b) return true;
                if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
            }
        }
        return false;
    }

private:
    std::vector<OpId> compute_topo_order() const {
        std::vector<OpId> indeg(n_ + 1, 0), order;
        for (OpId v = 1; v <= n_; ++v)
            for (OpId w : succ_[v]) indeg[w]++;
        std::vector<OpId> ready;
        for (OpId v = 1; v <= n_; ++v)
            if (indeg[v] == 0) ready.push_back(v);
        order.reserve(n_);
        while (!ready.empty()) {
            const OpId v = ready.back();
            ready.pop_back();
            order.push_back(v);
            for (OpId w : succ_[v])
                if (--indeg[w] == 0) ready.push_back(w);
        }
        return order;  // shorter than n_ iff a cycle exists
    }

    void build_descendants() {
        const std::size_t words = (static_cast<std::size_t>(n_) >> 6) + 1;
        desc_.assign(static_cast<std::size_t>(n_) + 1, std::vector<std::uint64_t>(words, 0));
        for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
            const std::size_t v = static_cast<std::size_t>(*it);
            for (OpId w : succ_[v]) {
                const std::size_t uw = static_cast<std::size_t>(w);
                desc_[v][uw >> 6] |= std::uint64_t{1} << (uw & 63);
                for (std::size_t x = 0; x < words; ++x) desc_[v][x] |= desc_[uw][x];
            }
        }
    }

    OpId n_ = 0;
    std::vector<std::vector<OpId>> succ_, pred_;
    std::vector<OpId> topo_;
    std::vector<std::vector<std::uint64_t>> desc_;
};

struct Instance {
    std::int32_t num_jobs = 0;
    std::int32_t num_machines = 0;
    std::vector<OperationSpec> operations;  // index 0 unused; ids 1..o
    PrecedenceDag dag;
    std::vector<Calendar> calendars;  // index 0 unused; per machine, normalized
    SetupTable setup;
    std::vector<FixedAssignment> fixed;

    OpId num_ops() const { return static_cast<OpId>(operations.size()) - 1; }
    const OperationSpec& op(OpId i) const { return operations.at(static_cast<std::size_t>(i)); }
    const Calendar& calendar(MachineId k) const { return calendars.at(static_cast<std::size_t>(k)); }

    bool is_fixed(OpId i) const { return fixed_of(i) != nullptr; }
    const FixedAssignment* fixed_of(OpId i) const {
        for (const auto& f : fixed)
            if (f.op == i) return &f;
        return nullptr;
    }

    /// Ascending ids of the non-fixed operations (the encoded ones).
    std::vector<OpId> non_fixed_ops() const {
        std::vector<OpId> out;
        out.reserve(static_cast<std::size_t>(num_ops()));
        for (OpId i = 1; i <= num_ops(); ++i)
            if (!is_fixed(i)) out.push_back(i);
        return out;
    }
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Check every structural invariant; violations are reported, not thrown.
inline ValidationReport validate_instance(const Instance& inst) {
    ValidationReport report;
    auto flag = [&](const std::string& msg) { report.violations.push_back(msg); };

    const OpId o = inst.num_ops();
    if (inst.num_jobs < 1) flag("job count: must be positive");
    if (inst.num_machines < 1) flag("machine count: must be positive");

    for (OpId i = 1; i <= o; ++i) {
        const auto& op = inst.op(i);
        if (op.id != i) flag("operation ids: not consecutive at " + std::to_string(i));
        if (op.job < 1 || op.job > inst.num_jobs)
            flag("operation " + std::to_string(i) + ": job out of range");
        if (op.machines.empty())
            flag("operation " + std::to_string(i) + ": eligible-machine set empty");
        for (const auto& mo : op.machines) {
            if (mo.machine < 1 || mo.machine > inst.num_machines)
                flag("operation " + std::to_string(i) + ": machine out of range");
            if (mo.processing < 1)
                flag("operation " + std::to_string(i) + ": processing time < 1");
        }
        for (std::size_t a = 1; a < op.machines.size(); ++a)
            if (op.machines[a - 1].machine >= op.machines[a].machine)
                flag("operation " + std::to_string(i) + ": machine list not strictly ascending");
        if (op.release < 0) flag("operation " + std::to_string(i) + ": negative release time");
        if (!op.theta.in_unit_interval_left_open())
            flag("operation " + std::to_string(i) + ": theta outside (0,1]");
    }

    if (!inst.dag.acyclic()) flag("dag acyclicity");

    for (std::size_t k = 1; k < inst.calendars.size(); ++k) {
        const Calendar& cal = inst.calendars[k];
        for (std::size_t j = 0; j < cal.size(); ++j) {
            if (cal[j].start >= cal[j].end || cal[j].start < 0)
                flag("calendar of machine " + std::to_string(k) + ": bad period");
            if (j > 0 && cal[j].start <= cal[j - 1].end)
                flag("calendar disjointness on machine " + std::to_string(k));
        }
    }

    std::vector<char> fixed_mark(static_cast<std::size_t>(o) + 1, 0);
    for (const auto& f : inst.fixed) {
        if (f.op < 1 || f.op > o) { flag("fixed op id out of range"); continue; }
        if (fixed_mark[static_cast<std::size_t>(f.op)])
            flag("fixed op " + std::to_string(f.op) + ": duplicated");
        fixed_mark[static_cast<std::size_t>(f.op)] = 1;
        const auto& op = inst.op(f.op);
        if (op.machines.size() != 1 || op.machines[0].machine != f.machine)
            flag("fixed op " + std::to_string(f.op) + ": eligible set must be exactly its machine");
        if (f.start < 0) flag("fixed op " + std::to_string(f.op) + ": negative start");
        if (f.machine >= 1 && f.machine <= inst.num_machines &&
            !is_valid_start(inst.calendar(f.machine), f.start))
            flag("fixed op " + std::to_string(f.op) + ": start inside downtime");
    }
    if (inst.dag.acyclic()) {
        for (const auto& f : inst.fixed)
            if (f.op >= 1 && f.op <= o)
                for (OpId p : inst.dag.predecessors(f.op))
                    if (!fixed_mark[static_cast<std::size_t>(p)])
                        flag("fixed-predecessor closure violated at op " + std::to_string(f.op));
    }

    // Fixed ops sharing a machine may not overlap in time.
    for (std::size_t a = 0; a < inst.fixed.size(); ++a) {
        for (std::size_t b = a + 1; b < inst.fixed.size(); ++b) {
            const auto& fa = inst.fixed[a];
            const auto& fb = inst.fixed[b];
            if (fa.machine != fb.machine) continue;
            if (fa.machine < 1 || fa.machine > inst.num_machines) continue;
            if (fa.op < 1 || fa.op > o || fb.op < 1 || fb.op > o) continue;
            if (!inst.op(fa.op).eligible(fa.machine) || !inst.op(fb.op).eligible(fb.machine)) continue;
            const Calendar& cal = inst.calendar(fa.machine);
            const auto& first = fa.start <= fb.start ? fa : fb;
            const auto& second = fa.start <= fb.start ? fb : fa;
            if (!is_valid_start(cal, first.start)) continue;
            const Time c_first =
                completion_time(cal, first.start, inst.op(first.op).processing_on(first.machine)).first;
            if (second.start < c_first)
                flag("fixed ops " + std::to_string(fa.op) + "," + std::to_string(fb.op) +
                     ": overlap on machine " + std::to_string(fa.machine));
        }
    }

    return report;
}

/// True iff b is reachable from a in the precedence DAG.
inline bool has_path(const PrecedenceDag& dag, OpId a, OpId b) { return dag.has_path(a, b); }

}  // namespace ops
