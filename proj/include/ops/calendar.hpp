#pragma once

// Machine-calendar arithmetic.  A calendar is a sorted list of disjoint
// downtime periods [start, end] with integer endpoints (end exclusive for
// starting-time purposes, inclusive for completion-time purposes):
//
//   starts     s  must satisfy  s ∉ [start, end)
//   completions c must satisfy  c ∉ (start, end]
//   setups occupy (s - xi, s] and may not intersect [start, end] at all
//
// Processing is resumable across downtime, setups are not.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

namespace ops {

using Time = std::int64_t;

struct Period {
    Time start = 0;
    Time end = 0;  // start < end

    bool operator==(const Period&) const = default;
};

using Calendar = std::vector<Period>;

/// Sort and coalesce overlapping or touching periods.
inline Calendar normalize_periods(Calendar periods) {
    std::sort(periods.begin(), periods.end(),
              [](const Period& a, const Period& b) { return a.start < b.start; });
    Calendar out;
    for (const Period& p : periods) {
        if (!out.empty() && p.start <= out.back().end)
            out.back().end = std::max(out.back().end, p.end);
        else
            out.push_back(p);
    }
    return out;
}

inline bool is_valid_start(const Calendar& cal, Time s) {
    for (const Period& p : cal) {
        if (p.start > s) break;
        if (s < p.end) return false;  // s in [start, end)
    }
    return true;
}

inline bool is_valid_completion(const Calendar& cal, Time c) {
    for (const Period& p : cal) {
        if (p.start >= c) break;
        if (c <= p.end) return false;  // c in (start, end]
    }
    return true;
}

/// True iff the setup window (s - setup, s] touches no downtime.
inline bool setup_fits(const Calendar& cal, Time s, Time setup) {
    if (setup == 0) return true;
    for (const Period& p : cal) {
        if (p.start > s) break;
        if (p.end > s - setup) return false;  // [start,end] meets (s-setup, s]
    }
    return true;
}

/// Total downtime intersected with [a, b].
inline Time downtime_in(const Calendar& cal, Time a, Time b) {
    Time total = 0;
    for (const Period& p : cal) {
        if (p.start >= b) break;
        const Time lo = std::max(a, p.start);
        const Time hi = std::min(b, p.end);
        if (hi > lo) total += hi - lo;
    }
    return total;
}

/// Machine-available time within [a, b].
inline Time avail_in(const Calendar& cal, Time a, Time b) {
    return (b - a) - downtime_in(cal, a, b);
}

/// Earliest s >= lb that is a valid starting time and whose setup window
/// (s - setup, s] avoids all downtime.  Candidates are lb and each period
/// end shifted by the setup length.
inline Time earliest_start(const Calendar& cal, Time lb, Time setup) {
    auto feasible = [&](Time s) { return is_valid_start(cal, s) && setup_fits(cal, s, setup); };
    if (feasible(lb)) return lb;
    Time best = -1;
    for (const Period& p : cal) {
        const Time cand = p.end + setup;
        if (cand < lb) continue;
        if (feasible(cand) && (best < 0 || cand < best)) best = cand;
    }
    assert(best >= 0);
    return best;
}

/// Completion time for p units of processing starting at valid s, splitting
/// around downtime.  Returns (c, u) with size([s,c]) - u = p and u the
/// downtime inside [s, c].  When the remaining work ends exactly at a period
/// start, c is that period start (never pushed into the downtime).
inline std::pair<Time, Time> completion_time(const Calendar& cal, Time s, Time p) {
    Time t = s;
    Time remaining = p;
    Time u = 0;
    for (const Period& per : cal) {
        if (per.end <= t) continue;
        assert(t <= per.start);  // valid starts never sit inside a period
        const Time room = per.start - t;
        if (remaining <= room) return {t + remaining, u};
        remaining -= room;
        u += per.end - per.start;
        t = per.end;
    }
    return {t + remaining, u};
}

/// Step-5 delay: available machine time in [c, c_lb'] where c_lb' is c_lb
/// bumped past the downtime period containing it, if any.  Pre: c < c_lb.
inline Time compute_delay(const Calendar& cal, Time c, Time c_lb) {
    Time target = c_lb;
    for (const Period& p : cal) {
        if (c_lb > p.start && c_lb <= p.end) {  // c_lb in (start, end]
            target = p.end + 1;
            break;
        }
    }
    return avail_in(cal, c, target);
}

/// Partial completion: completion_time with the partial workload.
inline Time partial_completion(const Calendar& cal, Time s, Time p_bar) {
    return completion_time(cal, s, p_bar).first;
}

}  // namespace ops
