#pragma once

// JSON (de)serialization of instances.  The on-disk schema:
//
// { "n": int, "m": int,
//   "operations": [ { "id": int, "job": int, "machines": [{"k":int,"p":int}...],
//                     "release": int, "theta": {"num":int,"den":int} } ... ],
//   "arcs": [ [i, j] ... ],
//   "calendars": [ { "machine": int, "periods": [[start,end]...] } ... ],
//   "setup_initial": [ { "machine": int, "op": int, "value": int } ... ],
//   "setup": [ { "machine": int, "from": int, "to": int, "value": int } ... ],
//   "fixed": [ { "op": int, "machine": int, "start": int } ... ] }
//
// Omitted setup entries default to 0; omitted calendars mean always
// available.  serialize_instance emits a canonical form (sorted entries,
// zero setups dropped) so serialize∘parse is the identity on it.

#include <algorithm>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ops/instance.hpp"

namespace ops {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using Json = nlohmann::ordered_json;

inline const Json& require(const Json& j, const char* field, const std::string& path) {
    if (!j.contains(field))
        throw ParseError(path + ": missing field '" + field + "'");
    return j.at(field);
}

inline std::int64_t require_int(const Json& j, const char* field, const std::string& path) {
    const Json& v = require(j, field, path);
    if (!v.is_number_integer())
        throw ParseError(path + "." + field + ": expected integer");
    return v.get<std::int64_t>();
}

}  // namespace detail

inline Instance parse_instance(const std::string& text) {
    using detail::Json;
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("$: expected object");

    Instance inst;
    inst.num_jobs = static_cast<std::int32_t>(detail::require_int(root, "n", "$"));
    inst.num_machines = static_cast<std::int32_t>(detail::require_int(root, "m", "$"));

    const Json& ops_json = detail::require(root, "operations", "$");
    if (!ops_json.is_array()) throw ParseError("$.operations: expected array");
    inst.operations.resize(ops_json.size() + 1);
    std::size_t seen = 0;
    for (std::size_t idx = 0; idx < ops_json.size(); ++idx) {
        const std::string path = "$.operations[" + std::to_string(idx) + "]";
        const Json& oj = ops_json[idx];
        OperationSpec op;
        op.id = static_cast<OpId>(detail::require_int(oj, "id", path));
        if (op.id < 1 || op.id > static_cast<OpId>(ops_json.size()))
            throw ParseError(path + ": operation indices must be 1..o consecutive");
        op.job = static_cast<std::int32_t>(detail::require_int(oj, "job", path));
        const Json& machines = detail::require(oj, "machines", path);
        if (!machines.is_array() || machines.empty())
            throw ParseError(path + ".machines: expected non-empty array");
        for (std::size_t mi = 0; mi < machines.size(); ++mi) {
            const std::string mpath = path + ".machines[" + std::to_string(mi) + "]";
            op.machines.push_back({
                static_cast<MachineId>(detail::require_int(machines[mi], "k", mpath)),
                detail::require_int(machines[mi], "p", mpath)});
        }
        std::sort(op.machines.begin(), op.machines.end(),
                  [](const MachineOption& a, const MachineOption& b) { return a.machine < b.machine; });
        for (std::size_t mi = 1; mi < op.machines.size(); ++mi)
            if (op.machines[mi].machine == op.machines[mi - 1].machine)
                throw ParseError(path + ".machines: duplicate machine id");
        op.release = oj.contains("release") ? detail::require_int(oj, "release", path) : 0;
        if (oj.contains("theta")) {
            const Json& tj = oj.at("theta");
            op.theta = Rational(detail::require_int(tj, "num", path + ".theta"),
                                detail::require_int(tj, "den", path + ".theta"));
        }
        if (inst.operations[static_cast<std::size_t>(op.id)].id != 0)
            throw ParseError(path + ": duplicate operation id " + std::to_string(op.id));
        inst.operations[static_cast<std::size_t>(op.id)] = op;
        ++seen;
    }
    if (seen != ops_json.size()) throw ParseError("$.operations: ids must cover 1..o");

    std::vector<std::pair<OpId, OpId>> arcs;
    if (root.contains("arcs")) {
        const Json& aj = root.at("arcs");
        if (!aj.is_array()) throw ParseError("$.arcs: expected array");
        for (std::size_t ai = 0; ai < aj.size(); ++ai) {
            const std::string path = "$.arcs[" + std::to_string(ai) + "]";
            if (!aj[ai].is_array() || aj[ai].size() != 2)
                throw ParseError(path + ": expected pair [i,j]");
            arcs.emplace_back(static_cast<OpId>(aj[ai][0].get<std::int64_t>()),
                              static_cast<OpId>(aj[ai][1].get<std::int64_t>()));
        }
    }
    try {
        inst.dag = PrecedenceDag(static_cast<OpId>(ops_json.size()), arcs);
    } catch (const std::out_of_range& e) {
        throw ParseError(std::string("$.arcs: ") + e.what());
    }

    inst.calendars.assign(static_cast<std::size_t>(inst.num_machines) + 1, {});
    if (root.contains("calendars")) {
        const Json& cj = root.at("calendars");
        if (!cj.is_array()) throw ParseError("$.calendars: expected array");
        for (std::size_t ci = 0; ci < cj.size(); ++ci) {
            const std::string path = "$.calendars[" + std::to_string(ci) + "]";
            const auto k = detail::require_int(cj[ci], "machine", path);
            if (k < 1 || k > inst.num_machines)
                throw ParseError(path + ": machine out of range");
            const Json& pj = detail::require(cj[ci], "periods", path);
            Calendar cal;
            for (std::size_t pi = 0; pi < pj.size(); ++pi) {
                if (!pj[pi].is_array() || pj[pi].size() != 2)
                    throw ParseError(path + ".periods[" + std::to_string(pi) + "]: expected [start,end]");
                cal.push_back({pj[pi][0].get<Time>(), pj[pi][1].get<Time>()});
            }
            for (const Period& p : cal)
                if (p.start >= p.end || p.start < 0)
                    throw ParseError(path + ": period must satisfy 0 <= start < end");
            inst.calendars[static_cast<std::size_t>(k)] = normalize_periods(std::move(cal));
        }
    }

    auto parse_setup = [&](const char* field, bool initial) {
        if (!root.contains(field)) return;
        const Json& sj = root.at(field);
        if (!sj.is_array()) throw ParseError(std::string("$.") + field + ": expected array");
        for (std::size_t si = 0; si < sj.size(); ++si) {
            const std::string path = "$." + std::string(field) + "[" + std::to_string(si) + "]";
            const auto k = static_cast<MachineId>(detail::require_int(sj[si], "machine", path));
            const Time value = detail::require_int(sj[si], "value", path);
            if (value < 0) throw ParseError(path + ": negative setup time");
            if (initial) {
                const auto to = static_cast<OpId>(detail::require_int(sj[si], "op", path));
                if (to < 1 || to > inst.num_ops()) throw ParseError(path + ": op out of range");
                if (!inst.op(to).eligible(k))
                    throw ParseError(path + ": setup defined for ineligible machine");
                inst.setup.set_initial(k, to, value);
            } else {
                const auto from = static_cast<OpId>(detail::require_int(sj[si], "from", path));
                const auto to = static_cast<OpId>(detail::require_int(sj[si], "to", path));
                if (from < 1 || from > inst.num_ops() || to < 1 || to > inst.num_ops())
                    throw ParseError(path + ": op out of range");
                if (!inst.op(from).eligible(k) || !inst.op(to).eligible(k))
                    throw ParseError(path + ": setup defined for ineligible machine");
                inst.setup.set(k, from, to, value);
            }
        }
    };
    parse_setup("setup_initial", true);
    parse_setup("setup", false);

    if (root.contains("fixed")) {
        const Json& fj = root.at("fixed");
        if (!fj.is_array()) throw ParseError("$.fixed: expected array");
        for (std::size_t fi = 0; fi < fj.size(); ++fi) {
            const std::string path = "$.fixed[" + std::to_string(fi) + "]";
            inst.fixed.push_back({
                static_cast<OpId>(detail::require_int(fj[fi], "op", path)),
                static_cast<MachineId>(detail::require_int(fj[fi], "machine", path)),
                detail::require_int(fj[fi], "start", path)});
        }
        std::sort(inst.fixed.begin(), inst.fixed.end(),
                  [](const FixedAssignment& a, const FixedAssignment& b) { return a.op < b.op; });
    }

    const ValidationReport report = validate_instance(inst);
    if (!report.ok())
        throw ParseError("invalid instance: " + report.violations.front());
    return inst;
}

inline std::string serialize_instance(const Instance& inst) {
    using detail::Json;
    Json root;
    root["n"] = inst.num_jobs;
    root["m"] = inst.num_machines;

    Json ops_json = Json::array();
    for (OpId i = 1; i <= inst.num_ops(); ++i) {
        const auto& op = inst.op(i);
        Json oj;
        oj["id"] = op.id;
        oj["job"] = op.job;
        Json machines = Json::array();
        for (const auto& mo : op.machines)
            machines.push_back({{"k", mo.machine}, {"p", mo.processing}});
        oj["machines"] = std::move(machines);
        oj["release"] = op.release;
        oj["theta"] = {{"num", op.theta.num}, {"den", op.theta.den}};
        ops_json.push_back(std::move(oj));
    }
    root["operations"] = std::move(ops_json);

    std::vector<std::pair<OpId, OpId>> arcs;
    for (OpId i = 1; i <= inst.num_ops(); ++i)
        for (OpId j : inst.dag.successors(i)) arcs.emplace_back(i, j);
    std::sort(arcs.begin(), arcs.end());
    Json arcs_json = Json::array();
    for (const auto& [a, b] : arcs) arcs_json.push_back({a, b});
    root["arcs"] = std::move(arcs_json);

    Json cal_json = Json::array();
    for (MachineId k = 1; k <= inst.num_machines; ++k) {
        const Calendar& cal = inst.calendar(k);
        if (cal.empty()) continue;
        Json periods = Json::array();
        for (const Period& p : cal) periods.push_back({p.start, p.end});
        cal_json.push_back({{"machine", k}, {"periods", std::move(periods)}});
    }
    root["calendars"] = std::move(cal_json);

    struct InitialEntry { MachineId k; OpId to; Time v; };
    struct BetweenEntry { MachineId k; OpId from, to; Time v; };
    std::vector<InitialEntry> initial;
    std::vector<BetweenEntry> between;
    inst.setup.for_each_initial([&](MachineId k, OpId to, Time v) { initial.push_back({k, to, v}); });
    inst.setup.for_each_between(
        [&](MachineId k, OpId from, OpId to, Time v) { between.push_back({k, from, to, v}); });
    std::sort(initial.begin(), initial.end(), [](const InitialEntry& a, const InitialEntry& b) {
        return std::tie(a.k, a.to) < std::tie(b.k, b.to);
    });
    std::sort(between.begin(), between.end(), [](const BetweenEntry& a, const BetweenEntry& b) {
        return std::tie(a.k, a.from, a.to) < std::tie(b.k, b.from, b.to);
    });
    Json si_json = Json::array();
    for (const auto& e : initial)
        si_json.push_back({{"machine", e.k}, {"op", e.to}, {"value", e.v}});
    root["setup_initial"] = std::move(si_json);
    Json sb_json = Json::array();
    for (const auto& e : between)
        sb_json.push_back({{"machine", e.k}, {"from", e.from}, {"to", e.to}, {"value", e.v}});
    root["setup"] = std::move(sb_json);

    Json fixed_json = Json::array();
    for (const auto& f : inst.fixed)
        fixed_json.push_back({{"op", f.op}, {"machine", f.machine}, {"start", f.start}});
    root["fixed"] = std::move(fixed_json);

    return root.dump(2) + "\n";
}

}  // namespace ops
