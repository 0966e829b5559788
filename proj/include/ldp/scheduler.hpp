#ifndef LDP_SCHEDULER_HPP
#define LDP_SCHEDULER_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldp/conflict_graph.hpp"
#include "ldp/errors.hpp"
#include "ldp/random.hpp"
#include "ldp/rational.hpp"
#include "ldp/traffic.hpp"

namespace ldp {

/// Local deadline partition: the time slice between the nearest
/// arrival/deadline events of a link's closed neighborhood.
struct Partition {
    SlotIndex start = 0; // d'
    SlotIndex end = 0;   // d'' (exclusive)
    SlotIndex length() const { return end - start; }
};

enum class ChannelState : std::uint8_t { Undecided, Active, Inactive };

/// Per-link scheduler state. Local demand is kept as an exact rational;
/// the per-period grant counter stays integral and authoritative.
struct LinkRuntimeState {
    LinkTraffic traffic;
    std::int64_t period_index = 0;       // P_{i,t}; 0 before the first arrival
    std::int64_t grants_this_period = 0; // X'
    Partition partition{};
    bool has_partition = false;
    Rat demand_at_partition_start{0};
    std::int64_t grants_at_partition_start = 0;
    Rat local_demand{0};  // X_{i,t}, clamped at 0
    Rat local_density{0}; // rho_{i,t}
    std::vector<ChannelState> channel_states;
    bool delivered = false; // bernoulli mode: current packet already delivered

    /// Arrival and absolute deadline of the current packet; requires
    /// period_index >= 1.
    std::pair<SlotIndex, SlotIndex> current_packet_window() const {
        return arrival_and_deadline(traffic, period_index);
    }
};

/// One slot's outcome: the ACTIVE links per channel and the number of
/// coordination rounds the protocol needed to settle.
struct ScheduleSlot {
    SlotIndex slot = 0;
    std::vector<std::vector<LinkId>> active_per_channel;
    int rounds_to_converge = 0;
};

/// d' = latest arrival/deadline event <= t, d'' = earliest event > t,
/// over all packets of every link in the given neighborhood.
inline Partition partition_bounds(std::span<const LinkTraffic> neighborhood, SlotIndex t) {
    bool have_prev = false;
    SlotIndex d_prev = std::numeric_limits<SlotIndex>::min();
    SlotIndex d_next = std::numeric_limits<SlotIndex>::max();
    const auto consider_series = [&](SlotIndex first, SlotIndex period) {
        if (t >= first) {
            const SlotIndex k = (t - first) / period;
            d_prev = std::max(d_prev, first + k * period);
            have_prev = true;
            d_next = std::min(d_next, first + (k + 1) * period);
        } else {
            d_next = std::min(d_next, first);
        }
    };
    for (const LinkTraffic& l : neighborhood) {
        consider_series(l.first_arrival, l.period);                       // arrivals
        consider_series(l.first_arrival + l.relative_deadline, l.period); // deadlines
    }
    if (!have_prev)
        throw InvariantError("partition_bounds: no event at or before t=" + std::to_string(t));
    return Partition{d_prev, d_next};
}

/// Local traffic demand of the current partition at time t, recomputed
/// from the period counters (three cases: fresh partition with the
/// deadline ahead, mid-partition, deadline already passed).
inline Rat local_demand(const LinkRuntimeState& s, SlotIndex t) {
    if (s.period_index < 1) return Rat(0);
    const auto [arrival, deadline] = s.current_packet_window();
    (void)arrival;
    if (deadline <= s.partition.start) return Rat(0);
    if (t == s.partition.start) {
        const std::int64_t remaining = s.traffic.work_demand - s.grants_this_period;
        if (remaining <= 0) return Rat(0);
        return Rat(remaining) * Rat(s.partition.length(), deadline - s.partition.start);
    }
    const Rat spent(s.grants_this_period - s.grants_at_partition_start);
    const Rat left = s.demand_at_partition_start - spent;
    return left > Rat(0) ? left : Rat(0);
}

/// rho_{i,t}: local demand over the slots left in the partition.
inline Rat local_density(const LinkRuntimeState& s, SlotIndex t) {
    if (t >= s.partition.end)
        throw InvariantError("local_density queried at or past the partition end");
    return s.local_demand / Rat(s.partition.end - t);
}

namespace detail {

enum class PriorityRule { LocalDensity, EarliestDeadline };

/// The synchronous-round contention protocol shared by LDP and the EDF
/// baseline. Each round every link applies the decision rules against
/// its neighbors' last-shared states, then all links publish. A link's
/// own activations take effect immediately for its later channels; an
/// ACTIVE link advertises the priority it won with, so later rounds
/// contest against that frozen value rather than the post-grant one.
inline ScheduleSlot run_slot_protocol(std::vector<LinkRuntimeState>& states,
                                      std::int64_t channels, SlotIndex t,
                                      const std::vector<std::vector<int>>& neighbor_idx,
                                      PriorityRule rule) {
    const std::size_t n = states.size();
    const std::size_t nch = static_cast<std::size_t>(channels);

    std::vector<Rat> demand(n), prio(n);
    std::vector<SlotIndex> deadline(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        demand[v] = states[v].local_demand;
        if (rule == PriorityRule::LocalDensity) {
            const SlotIndex left = states[v].partition.end - t;
            prio[v] = (demand[v] > Rat(0) && left > 0)
                          ? std::min(demand[v] / Rat(left), Rat(1))
                          : Rat(0);
        } else {
            if (states[v].period_index >= 1)
                deadline[v] = states[v].current_packet_window().second;
            prio[v] = Rat(-deadline[v]); // earlier deadline = higher priority
        }
    }

    std::vector<std::vector<ChannelState>> st(n,
        std::vector<ChannelState>(nch, ChannelState::Undecided));
    std::vector<std::vector<Rat>> frozen(n, std::vector<Rat>(nch, Rat(0)));
    std::vector<char> contending(n);
    for (std::size_t v = 0; v < n; ++v) contending[v] = demand[v] > Rat(0);
    // Last-shared snapshot the neighbors see. Initial priorities and
    // demand-positivity are derivable from already-shared traffic state,
    // so round one may use them.
    auto snap_st = st;
    auto snap_frozen = frozen;
    auto snap_prio = prio;
    auto snap_contending = contending;

    const auto wins = [&](const Rat& pa, LinkId ida, const Rat& pb, LinkId idb) {
        return pa > pb || (pa == pb && ida > idb);
    };

    std::size_t undecided = n * nch;
    int rounds = 0;
    const int round_cap = static_cast<int>(n * nch) + 2;
    while (undecided > 0) {
        if (++rounds > round_cap)
            throw InvariantError("slot protocol failed to converge at slot " + std::to_string(t));
        for (std::size_t v = 0; v < n; ++v) {
            const LinkId my_id = states[v].traffic.link;
            for (std::size_t ch = 0; ch < nch; ++ch) {
                if (st[v][ch] != ChannelState::Undecided) continue;
                if (demand[v] <= Rat(0)) {
                    st[v][ch] = ChannelState::Inactive;
                    --undecided;
                    continue;
                }
                bool beats_all = true;
                bool beaten_by_active = false;
                for (const int nb : neighbor_idx[v]) {
                    const std::size_t u = static_cast<std::size_t>(nb);
                    const ChannelState nb_state = snap_st[u][ch];
                    if (nb_state == ChannelState::Inactive) continue;
                    if (nb_state == ChannelState::Undecided && !snap_contending[u])
                        continue; // known-idle neighbor; it cannot activate
                    const Rat& q = nb_state == ChannelState::Active ? snap_frozen[u][ch]
                                                                    : snap_prio[u];
                    if (!wins(prio[v], my_id, q, states[u].traffic.link)) {
                        beats_all = false;
                        if (nb_state == ChannelState::Active) {
                            beaten_by_active = true;
                            break;
                        }
                    }
                }
                if (beats_all) {
                    st[v][ch] = ChannelState::Active;
                    frozen[v][ch] = prio[v];
                    --undecided;
                    states[v].grants_this_period += 1;
                    demand[v] -= Rat(1);
                    if (demand[v] < Rat(0)) demand[v] = Rat(0);
                    contending[v] = demand[v] > Rat(0);
                    if (rule == PriorityRule::LocalDensity) {
                        const SlotIndex left = states[v].partition.end - t;
                        prio[v] = (demand[v] > Rat(0) && left > 0)
                                      ? std::min(demand[v] / Rat(left), Rat(1))
                                      : Rat(0);
                    }
                } else if (beaten_by_active) {
                    st[v][ch] = ChannelState::Inactive;
                    --undecided;
                }
            }
        }
        snap_st = st;
        snap_frozen = frozen;
        snap_prio = prio;
        snap_contending = contending;
    }

    ScheduleSlot out;
    out.slot = t;
    out.rounds_to_converge = rounds;
    out.active_per_channel.assign(nch, {});
    for (std::size_t v = 0; v < n; ++v) {
        states[v].channel_states = st[v];
        states[v].local_demand = demand[v];
        for (std::size_t ch = 0; ch < nch; ++ch)
            if (st[v][ch] == ChannelState::Active)
                out.active_per_channel[ch].push_back(states[v].traffic.link);
    }
    for (auto& links : out.active_per_channel) std::sort(links.begin(), links.end());
    return out;
}

inline std::vector<std::vector<int>> build_neighbor_indices(
    const ConflictGraph& g, const std::vector<LinkRuntimeState>& states) {
    std::vector<int> graph_to_state(g.node_count(), -1);
    for (std::size_t v = 0; v < states.size(); ++v)
        graph_to_state[static_cast<std::size_t>(g.index_of(states[v].traffic.link))] =
            static_cast<int>(v);
    std::vector<std::vector<int>> out(states.size());
    for (std::size_t v = 0; v < states.size(); ++v) {
        g.neighbors_bits(states[v].traffic.link).for_each_set([&](std::size_t u) {
            const int s = graph_to_state[u];
            if (s >= 0) out[v].push_back(s);
        });
    }
    return out;
}

} // namespace detail

/// One slot of LDP scheduling (Algorithm-1 protocol). States must carry
/// current partitions and demands; grants are applied to them.
inline ScheduleSlot schedule_slot(const ConflictGraph& g, std::vector<LinkRuntimeState>& states,
                                  std::int64_t channels, SlotIndex t) {
    const auto nbr = detail::build_neighbor_indices(g, states);
    return detail::run_slot_protocol(states, channels, t, nbr,
                                     detail::PriorityRule::LocalDensity);
}

/// One slot of the EDF comparison baseline: identical contention
/// protocol, priority by earliest absolute deadline.
inline ScheduleSlot edf_baseline_slot(const ConflictGraph& g,
                                      std::vector<LinkRuntimeState>& states,
                                      std::int64_t channels, SlotIndex t) {
    const auto nbr = detail::build_neighbor_indices(g, states);
    return detail::run_slot_protocol(states, channels, t, nbr,
                                     detail::PriorityRule::EarliestDeadline);
}

enum class SimMode { Deterministic, Bernoulli };
enum class SchedulerKind { Ldp, EdfBaseline };

struct SimulationOptions {
    SimMode mode = SimMode::Deterministic;
    SchedulerKind scheduler = SchedulerKind::Ldp;
    std::uint64_t seed = 1;
    /// Assert Theorem 1 every slot: per channel, the ACTIVE set is
    /// independent and maximal among links with remaining demand.
    bool check_maximality = true;
    /// Cross-check the running local demand against the counter-based
    /// recomputation every slot.
    bool verify_demand = true;
    /// Called when a packet misses its deadline, with the previous
    /// slot's local densities (by dense graph index).
    std::function<void(LinkId, SlotIndex, std::span<const Rat>)> on_miss;
    /// Called once per slot with the converged schedule.
    std::function<void(const ScheduleSlot&)> on_slot;
};

struct SimulationReport {
    struct PerLink {
        LinkId link = 0;
        std::int64_t packets = 0;
        std::int64_t misses = 0;
        std::int64_t delivered_in_time = 0;
        std::optional<double> empirical_success; // bernoulli mode only
        bool schedulable = true;
    };
    std::vector<PerLink> links;
    SlotIndex slots = 0;
    int max_rounds = 0;
    double mean_rounds = 0.0;
    double schedulable_ratio = 1.0;
    std::int64_t total_packets = 0;
    std::int64_t total_misses = 0;
};

/// Time-stepped simulation of the chosen scheduler over [0, horizon).
/// Deterministic: a packet succeeds iff all its transmission
/// opportunities are granted by the absolute deadline. Bernoulli: each
/// granted opportunity succeeds with the link reliability; the packet
/// completes on the first success and the link stops transmitting it.
inline SimulationReport run_simulation(const ConflictGraph& g,
                                       std::span<const LinkTraffic> traffic,
                                       std::int64_t channels, SlotIndex horizon,
                                       const SimulationOptions& opt = {}) {
    if (channels < 1) throw InputError("channel count must be >= 1");
    if (horizon < 1) throw InputError("horizon must be >= 1");
    if (traffic.empty()) throw InputError("simulation requires at least one traffic entry");
    if (traffic.size() != g.node_count())
        throw InputError("traffic must cover every link of the conflict graph");

    std::vector<LinkRuntimeState> states(g.node_count());
    for (const LinkTraffic& t : traffic) {
        t.validate();
        if (horizon < t.period)
            throw InputError("horizon must be at least the longest period");
        const std::size_t v = static_cast<std::size_t>(g.index_of(t.link));
        if (states[v].traffic.link != 0)
            throw InputError("duplicate traffic entry for link " + std::to_string(t.link));
        states[v].traffic = t;
    }

    const bool ldp = opt.scheduler == SchedulerKind::Ldp;
    const bool bern = opt.mode == SimMode::Bernoulli;
    const auto nbr = detail::build_neighbor_indices(g, states);
    const std::size_t n = states.size();

    // Closed-neighborhood traffic per link, for partition recomputation.
    std::vector<std::vector<LinkTraffic>> hood(n);
    for (std::size_t v = 0; v < n; ++v) {
        hood[v].push_back(states[v].traffic);
        for (const int u : nbr[v]) hood[v].push_back(states[static_cast<std::size_t>(u)].traffic);
    }

    Rng rng(opt.seed);
    SimulationReport report;
    report.links.resize(n);
    for (std::size_t v = 0; v < n; ++v) report.links[v].link = states[v].traffic.link;
    report.slots = horizon;

    std::vector<Rat> prev_density(n, Rat(0));
    long long rounds_sum = 0;

    const auto account_deadlines = [&](SlotIndex t) {
        for (std::size_t v = 0; v < n; ++v) {
            LinkRuntimeState& s = states[v];
            if (s.period_index < 1) continue;
            const auto [arrival, deadline] = s.current_packet_window();
            (void)arrival;
            if (deadline != t) continue;
            auto& r = report.links[v];
            r.packets += 1;
            const bool ok = bern ? s.delivered
                                 : s.grants_this_period >= s.traffic.work_demand;
            if (ok) {
                r.delivered_in_time += 1;
            } else {
                r.misses += 1;
                if (opt.on_miss)
                    opt.on_miss(s.traffic.link, t, std::span<const Rat>(prev_density));
            }
        }
    };

    for (SlotIndex t = 0; t < horizon; ++t) {
        account_deadlines(t);

        // Arrivals: reset the per-period state.
        for (std::size_t v = 0; v < n; ++v) {
            LinkRuntimeState& s = states[v];
            const LinkTraffic& tr = s.traffic;
            if (t >= tr.first_arrival && (t - tr.first_arrival) % tr.period == 0) {
                s.period_index = (t - tr.first_arrival) / tr.period + 1;
                s.grants_this_period = 0;
                s.delivered = false;
            }
        }

        // Demand updates.
        for (std::size_t v = 0; v < n; ++v) {
            LinkRuntimeState& s = states[v];
            if (s.period_index < 1) {
                s.local_demand = Rat(0);
                s.local_density = Rat(0);
                continue;
            }
            if (ldp) {
                if (!s.has_partition || t >= s.partition.end) {
                    s.partition = partition_bounds(hood[v], t);
                    s.has_partition = true;
                    if (s.partition.start != t)
                        throw InvariantError("partition boundary does not start at t=" +
                                             std::to_string(t));
                    s.demand_at_partition_start = local_demand(s, t);
                    s.grants_at_partition_start = s.grants_this_period;
                    s.local_demand = s.demand_at_partition_start;
                } else if (opt.verify_demand && !(bern && s.delivered)) {
                    if (s.local_demand != local_demand(s, t))
                        throw InvariantError("local demand diverged from the counter formula");
                }
                if (bern && s.delivered) s.local_demand = Rat(0);
                s.local_density = local_density(s, t);
                if (opt.verify_demand && !bern &&
                    s.grants_this_period > s.traffic.work_demand)
                    throw InvariantError("grants exceeded the per-packet work demand");
            } else {
                const auto [arrival, deadline] = s.current_packet_window();
                (void)arrival;
                const std::int64_t remaining = s.traffic.work_demand - s.grants_this_period;
                const bool live = t < deadline && remaining > 0 && !(bern && s.delivered);
                s.local_demand = live ? Rat(remaining) : Rat(0);
                s.local_density = Rat(0);
            }
        }

        if (opt.on_miss)
            for (std::size_t v = 0; v < n; ++v) prev_density[v] = states[v].local_density;

        const ScheduleSlot slot = detail::run_slot_protocol(
            states, channels, t, nbr,
            ldp ? detail::PriorityRule::LocalDensity : detail::PriorityRule::EarliestDeadline);
        rounds_sum += slot.rounds_to_converge;
        report.max_rounds = std::max(report.max_rounds, slot.rounds_to_converge);

        if (opt.check_maximality) {
            for (std::size_t ch = 0; ch < static_cast<std::size_t>(channels); ++ch) {
                Bits active(g.node_count());
                for (const LinkId id : slot.active_per_channel[ch])
                    active.set(static_cast<std::size_t>(g.index_of(id)));
                for (std::size_t v = 0; v < n; ++v) {
                    const std::size_t gi =
                        static_cast<std::size_t>(g.index_of(states[v].traffic.link));
                    const bool is_active = states[v].channel_states[ch] == ChannelState::Active;
                    const bool meets_active = g.adjacency_bits(static_cast<int>(gi))
                                                  .intersects(active);
                    if (is_active && meets_active)
                        throw InvariantError("two interfering links active on one channel");
                    if (!is_active && states[v].local_demand > Rat(0) && !meets_active)
                        throw InvariantError("active set not maximal at slot " +
                                             std::to_string(t));
                }
            }
        }

        if (bern) {
            for (std::size_t ch = 0; ch < static_cast<std::size_t>(channels); ++ch) {
                for (const LinkId id : slot.active_per_channel[ch]) {
                    LinkRuntimeState& s =
                        states[static_cast<std::size_t>(g.index_of(id))];
                    if (s.delivered) continue;
                    if (rng.bernoulli(s.traffic.link_reliability)) s.delivered = true;
                }
            }
        }

        if (opt.on_slot) opt.on_slot(slot);
    }
    account_deadlines(horizon); // deadlines landing exactly at the horizon

    report.mean_rounds = horizon > 0 ? static_cast<double>(rounds_sum) /
                                           static_cast<double>(horizon)
                                     : 0.0;
    std::size_t ok_links = 0;
    for (auto& r : report.links) {
        report.total_packets += r.packets;
        report.total_misses += r.misses;
        if (bern && r.packets > 0)
            r.empirical_success = static_cast<double>(r.delivered_in_time) /
                                  static_cast<double>(r.packets);
        const LinkTraffic& tr = states[static_cast<std::size_t>(
            g.index_of(r.link))].traffic;
        r.schedulable = bern ? (r.packets == 0 ||
                                *r.empirical_success >= tr.reliability_req)
                             : r.misses == 0;
        if (r.schedulable) ++ok_links;
    }
    report.schedulable_ratio =
        report.links.empty() ? 1.0
                             : static_cast<double>(ok_links) /
                                   static_cast<double>(report.links.size());
    return report;
}

} // namespace ldp

#endif // LDP_SCHEDULER_HPP
