#ifndef LDP_TRAFFIC_GEN_HPP
#define LDP_TRAFFIC_GEN_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ldp/conflict_graph.hpp"
#include "ldp/errors.hpp"
#include "ldp/random.hpp"
#include "ldp/schedulability.hpp"
#include "ldp/traffic.hpp"

namespace ldp {

struct TrafficGenParams {
    SlotIndex deadline_min = 10;
    SlotIndex deadline_max = 40;
    int slack_divisor = 6;    // T - D drawn from {0 .. D/slack_divisor}
    int demand_lo_div = 6;    // X drawn from {ceil(D/6) .. floor(5D/6)}
    int demand_hi_num = 5;
    int demand_hi_div = 6;
    double link_reliability = 0.9; // p used by bernoulli-mode experiments
    SlotIndex first_arrival = 0;
    bool randomize_first_arrival = false; // per-link phase in {0 .. T-1}

    void validate() const {
        if (deadline_min < 2 || deadline_min > deadline_max)
            throw InputError("deadline range must satisfy 2 <= min <= max");
        if (slack_divisor < 1 || demand_lo_div < 1 || demand_hi_div < 1 || demand_hi_num < 1)
            throw InputError("traffic divisors must be positive");
        if (!(link_reliability > 0.0 && link_reliability < 1.0))
            throw InputError("link reliability must lie in (0,1)");
        if (first_arrival < 0) throw InputError("first arrival must be >= 0");
    }
};

/// Returns whether `link` passes the schedulability test given the
/// whole current traffic set.
using SchedTestFn = std::function<bool(LinkId, const std::vector<LinkTraffic>&)>;

struct TrafficGenResult {
    std::vector<LinkTraffic> traffic;  // ordered by link id
    std::vector<LinkId> unschedulable; // still failing with the demand floored at 1
};

/// Per-link schedulability test bound to a channel count, with shared
/// structural memoization across calls.
inline SchedTestFn default_sched_test(const ConflictGraph& g, std::int64_t channels,
                                      FeasibilityContext& ctx) {
    return [&g, channels, &ctx](LinkId link, const std::vector<LinkTraffic>& traffic) {
        TrafficMap local;
        const Bits closed = g.closed_neighborhood_bits(link);
        for (const LinkTraffic& t : traffic)
            if (closed.test(static_cast<std::size_t>(g.index_of(t.link))))
                local.emplace(t.link, t);
        return schedulability_test(g, link, local, channels, &ctx).schedulable;
    };
}

/// Draws per-link (D, T, X) from the configured ranges, then walks links
/// in ascending id decrementing the work demand of any link that fails
/// the schedulability test until it passes, re-testing only links whose
/// two-hop neighborhood changed. Links still failing at X=1 are flagged,
/// not fatal. The reliability requirement is kept consistent with the
/// final X.
inline TrafficGenResult generate_traffic(const ConflictGraph& g, std::int64_t channels,
                                         Rng& rng, const SchedTestFn& sched_test,
                                         const TrafficGenParams& params = {}) {
    params.validate();
    if (g.node_count() == 0) throw InputError("conflict graph has no links");
    if (channels < 1) throw InputError("channel count must be >= 1");

    FeasibilityContext fallback_ctx(g);
    const SchedTestFn test =
        sched_test ? sched_test : default_sched_test(g, channels, fallback_ctx);

    TrafficGenResult result;
    result.traffic.reserve(g.node_count());
    for (const LinkId id : g.link_ids()) {
        const SlotIndex d = rng.uniform_int(params.deadline_min, params.deadline_max);
        const SlotIndex slack = rng.uniform_int(0, d / params.slack_divisor);
        const std::int64_t x_lo = (d + params.demand_lo_div - 1) / params.demand_lo_div;
        const std::int64_t x_hi = (params.demand_hi_num * d) / params.demand_hi_div;
        const std::int64_t x = rng.uniform_int(std::max<std::int64_t>(1, x_lo),
                                               std::max<std::int64_t>(1, x_hi));
        const SlotIndex period = d + slack;
        const SlotIndex a1 = params.randomize_first_arrival
                                 ? params.first_arrival + rng.uniform_int(0, period - 1)
                                 : params.first_arrival;
        result.traffic.push_back(make_link_traffic(
            id, period, d, reliability_for(params.link_reliability, x),
            params.link_reliability, a1, x));
    }

    std::unordered_map<LinkId, std::size_t> slot_of;
    for (std::size_t k = 0; k < result.traffic.size(); ++k)
        slot_of.emplace(result.traffic[k].link, k);

    const auto mark_affected = [&](LinkId i, std::set<LinkId>& dirty) {
        dirty.insert(i);
        for (const LinkId l : g.neighbors(i)) dirty.insert(l);
        for (const LinkId l : g.two_hop_set(i)) dirty.insert(l);
    };

    std::set<LinkId> dirty(g.link_ids().begin(), g.link_ids().end());
    std::set<LinkId> stuck;
    while (!dirty.empty()) {
        const LinkId i = *dirty.begin();
        dirty.erase(dirty.begin());
        if (test(i, result.traffic)) {
            stuck.erase(i);
            continue;
        }
        LinkTraffic& t = result.traffic[slot_of.at(i)];
        if (t.work_demand <= 1) {
            stuck.insert(i);
            continue;
        }
        t.work_demand -= 1;
        t.reliability_req = reliability_for(t.link_reliability, t.work_demand);
        mark_affected(i, dirty);
    }
    result.unschedulable.assign(stuck.begin(), stuck.end());
    return result;
}

} // namespace ldp

#endif // LDP_TRAFFIC_GEN_HPP
