#ifndef LDP_SCHEDULABILITY_HPP
#define LDP_SCHEDULABILITY_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldp/bits.hpp"
#include "ldp/conflict_graph.hpp"
#include "ldp/errors.hpp"
#include "ldp/rational.hpp"
#include "ldp/traffic.hpp"

namespace ldp {

/// A feasible set of links around an owner plus its sum work density.
struct FeasibleSetResult {
    std::vector<LinkId> members; // sorted ascending
    Rat sum_density{0};          // U = sum of X_l/D_l over members
};

/// Outcome of the per-link schedulability test plus the derived
/// approximation-ratio metrics.
struct SchedulabilityVerdict {
    struct PerClique {
        std::vector<LinkId> clique;
        Rat min_density{0};              // minimum feasible-set density found for this clique
        std::vector<LinkId> min_members; // the feasible set achieving it
    };

    LinkId link = 0;
    bool schedulable = false;
    std::vector<PerClique> per_clique;
    bool necessary_ok = false;
    Rat delta{0};       // necessary-condition load over sufficient-condition load
    Rat delta_prime{0}; // largest-clique size over largest minimizing-feasible-set size
};

using TrafficMap = std::unordered_map<LinkId, LinkTraffic>;
using DensityMap = std::unordered_map<LinkId, Rat>;

inline TrafficMap make_traffic_map(std::span<const LinkTraffic> traffic) {
    TrafficMap map;
    map.reserve(traffic.size());
    for (const auto& t : traffic) {
        if (!map.emplace(t.link, t).second)
            throw InputError("duplicate traffic entry for link " + std::to_string(t.link));
    }
    return map;
}

/// Memoizes the structural (density-independent) parts of the
/// schedulability machinery for one conflict graph: per-link clique
/// families, two-hop masks, and feasibility verdicts keyed by the
/// induced vertex set they were decided on. Reusing one context across
/// calls on the same graph makes repeated tests (e.g. the traffic
/// generator's demand-reduction loop) cheap. Not thread-safe; use one
/// context per thread.
class FeasibilityContext {
public:
    struct Stats {
        std::uint64_t theorem3_checks = 0; // logical feasibility queries
        std::uint64_t theorem3_evals = 0;  // queries that ran a MIS enumeration
    };

    explicit FeasibilityContext(const ConflictGraph& g) : g_(&g) {}

    const ConflictGraph& graph() const { return *g_; }
    const Stats& stats() const { return stats_; }
    void reset_stats() { stats_ = Stats{}; }

    /// Theorem-3 feasibility of S (dense-index mask) around link i:
    /// infeasible iff some maximal independent set of the induced
    /// M' = ({i} ∪ M_i ∪ M_{i,2}) \ S interferes with every member of S.
    /// Such an MIS exists iff some independent subset of M' already
    /// dominates S (any dominating independent set extends to an MIS, and
    /// restricting a dominating MIS to the S-adjacent part keeps it
    /// dominating), so the check searches for that witness directly
    /// instead of enumerating the MIS family. S must already satisfy
    /// i ∈ S ⊆ M_i ∪ {i}.
    bool feasible(LinkId i, const Bits& s_bits) {
        ++stats_.theorem3_checks;
        LinkLocal& loc = local(i);
        Bits rest = loc.base;
        rest.subtract(s_bits);
        if (rest.none()) return true;
        const auto it = loc.feasibility_memo.find(rest);
        if (it != loc.feasibility_memo.end()) return it->second;

        ++stats_.theorem3_evals;
        std::vector<Bits> covers; // per member of S: its M'-neighbors
        bool feasible_now = false;
        s_bits.for_each_set([&](std::size_t v) {
            covers.push_back(g_->adjacency_bits(static_cast<int>(v)) & rest);
            if (covers.back().none()) feasible_now = true; // untouchable member
        });
        const bool result = feasible_now || !dominating_witness(covers, rest);
        loc.feasibility_memo.emplace(std::move(rest), result);
        return result;
    }

    const std::vector<std::vector<LinkId>>& cliques(LinkId i) { return local(i).clique_ids; }
    const std::vector<Bits>& clique_bits(LinkId i) { return local(i).clique_bits; }
    const Bits& closed_neighborhood(LinkId i) { return local(i).closed; }

private:
    struct LinkLocal {
        Bits closed; // M_i ∪ {i}
        Bits base;   // {i} ∪ M_i ∪ M_{i,2}
        std::vector<std::vector<LinkId>> clique_ids;
        std::vector<Bits> clique_bits;
        std::unordered_map<Bits, bool, BitsHash> feasibility_memo;
    };

    LinkLocal& local(LinkId i) {
        auto it = locals_.find(i);
        if (it != locals_.end()) return it->second;
        LinkLocal loc;
        loc.closed = g_->closed_neighborhood_bits(i);
        loc.base = loc.closed | g_->two_hop_bits(i);
        CliqueFamily family = g_->cliques_containing(i);
        loc.clique_ids = std::move(family.cliques);
        loc.clique_bits.reserve(loc.clique_ids.size());
        for (const auto& clique : loc.clique_ids) {
            Bits b(g_->node_count());
            for (LinkId id : clique) b.set(static_cast<std::size_t>(g_->index_of(id)));
            loc.clique_bits.push_back(std::move(b));
        }
        return locals_.emplace(i, std::move(loc)).first->second;
    }

    const ConflictGraph* g_;
    std::unordered_map<LinkId, LinkLocal> locals_;
    Stats stats_;
};

namespace detail {

inline Bits ids_to_bits(const ConflictGraph& g, std::span<const LinkId> ids) {
    Bits b(g.node_count());
    for (LinkId id : ids) b.set(static_cast<std::size_t>(g.index_of(id)));
    return b;
}

inline std::vector<LinkId> bits_to_ids(const ConflictGraph& g, const Bits& b) {
    std::vector<LinkId> out;
    out.reserve(b.count());
    b.for_each_set([&](std::size_t v) { out.push_back(g.id_of(static_cast<int>(v))); });
    return out;
}

/// Densities indexed by dense graph index; entries outside M_i ∪ {i}
/// stay unset and must never be summed.
struct DenseDensities {
    std::vector<std::optional<Rat>> by_index;

    static DenseDensities from_map(const ConflictGraph& g, LinkId i, const DensityMap& densities) {
        DenseDensities out;
        out.by_index.assign(g.node_count(), std::nullopt);
        Bits closed = g.closed_neighborhood_bits(i);
        closed.for_each_set([&](std::size_t v) {
            const LinkId id = g.id_of(static_cast<int>(v));
            const auto it = densities.find(id);
            if (it == densities.end())
                throw InputError("missing density for link " + std::to_string(id));
            if (it->second <= Rat(0))
                throw InputError("density must be positive for link " + std::to_string(id));
            out.by_index[v] = it->second;
        });
        return out;
    }

    Rat sum(const Bits& members) const {
        Rat total(0);
        members.for_each_set([&](std::size_t v) { total += *by_index[v]; });
        return total;
    }
};

inline void validate_clique_around(const ConflictGraph& g, LinkId i, const Bits& k_bits,
                                   const Bits& closed) {
    if (!k_bits.test(static_cast<std::size_t>(g.index_of(i))))
        throw InputError("clique must contain link " + std::to_string(i));
    Bits outside = k_bits;
    outside.subtract(closed);
    if (outside.any())
        throw InputError("clique exceeds the closed neighborhood of link " + std::to_string(i));
    std::vector<int> verts;
    k_bits.for_each_set([&](std::size_t v) { verts.push_back(static_cast<int>(v)); });
    for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t b = a + 1; b < verts.size(); ++b)
            if (!g.adjacency_bits(verts[a]).test(static_cast<std::size_t>(verts[b])))
                throw InputError("set is not a clique around link " + std::to_string(i));
}

/// Minimum-sum-density feasible-set search for one clique: try the
/// clique itself, otherwise grow it with a second clique and repeatedly
/// reduce, keeping the best candidate seen. The result is an upper bound
/// on the true minimum; it is always a genuine feasible set containing
/// the clique.
class MinDensitySearch {
public:
    MinDensitySearch(FeasibilityContext& ctx, LinkId i, const DenseDensities& densities)
        : ctx_(ctx), i_(i), densities_(densities) {}

    FeasibleSetResult run(const Bits& k_bits) {
        const ConflictGraph& g = ctx_.graph();
        const Bits& closed = ctx_.closed_neighborhood(i_);
        best_members_ = closed; // always feasible fallback
        best_u_ = densities_.sum(closed);

        if (ctx_.feasible(i_, k_bits)) {
            best_members_ = k_bits;
            best_u_ = densities_.sum(k_bits);
            return result(g);
        }

        // A non-maximal input clique is not in the family; every family
        // member then acts as a growth candidate.
        const std::vector<Bits>& cliques = ctx_.clique_bits(i_);
        std::vector<std::size_t> others;
        for (std::size_t c = 0; c < cliques.size(); ++c)
            if (!(cliques[c] == k_bits)) others.push_back(c);
        for (std::size_t x = 0; x < others.size(); ++x) {
            Bits fix = k_bits | cliques[others[x]];
            std::vector<std::size_t> waiting;
            waiting.reserve(others.size() - 1);
            for (std::size_t off = 1; off < others.size(); ++off)
                waiting.push_back(others[(x + off) % others.size()]);
            reduce(std::move(fix), waiting);
        }
        return result(g);
    }

private:
    void reduce(Bits fix, const std::vector<std::size_t>& waiting) {
        // Anything recorded below extends fix, so a fix already denser
        // than the best candidate cannot improve on it.
        if (densities_.sum(fix) > best_u_) return;

        const std::vector<Bits>& cliques = ctx_.clique_bits(i_);
        std::vector<std::size_t> choice;
        std::vector<std::size_t> local_waiting;
        Bits waiting_union(fix.size());
        for (const std::size_t p : waiting) {
            Bits candidate = fix | waiting_union | cliques[p];
            if (ctx_.feasible(i_, candidate)) choice.push_back(p);
            else {
                local_waiting.push_back(p);
                waiting_union |= cliques[p];
            }
        }
        if (!local_waiting.empty()) {
            if (choice.empty()) return; // cannot happen once the full union is reached
            reduce(fix | cliques[pick_min(fix, choice)], local_waiting);
        } else if (ctx_.feasible(i_, fix)) {
            consider(fix);
        } else if (!choice.empty()) {
            consider(fix | cliques[pick_min(fix, choice)]);
        }
    }

    std::size_t pick_min(const Bits& fix, const std::vector<std::size_t>& choice) {
        const std::vector<Bits>& cliques = ctx_.clique_bits(i_);
        std::size_t best = choice.front();
        Bits best_bits = fix | cliques[best];
        Rat best_sum = densities_.sum(best_bits);
        for (std::size_t c = 1; c < choice.size(); ++c) {
            Bits bits = fix | cliques[choice[c]];
            const Rat sum = densities_.sum(bits);
            if (sum < best_sum ||
                (sum == best_sum && detail::bits_to_ids(ctx_.graph(), bits) <
                                        detail::bits_to_ids(ctx_.graph(), best_bits))) {
                best = choice[c];
                best_bits = std::move(bits);
                best_sum = sum;
            }
        }
        return best;
    }

    void consider(const Bits& members) {
        const Rat u = densities_.sum(members);
        if (u < best_u_ ||
            (u == best_u_ && detail::bits_to_ids(ctx_.graph(), members) <
                                 detail::bits_to_ids(ctx_.graph(), best_members_))) {
            best_members_ = members;
            best_u_ = u;
        }
    }

    FeasibleSetResult result(const ConflictGraph& g) const {
        return FeasibleSetResult{detail::bits_to_ids(g, best_members_), best_u_};
    }

    FeasibilityContext& ctx_;
    LinkId i_;
    const DenseDensities& densities_;
    Bits best_members_;
    Rat best_u_{0};
};

} // namespace detail

/// Theorem-3 feasibility: S is a feasible set around i iff either every
/// link within two hops of i is in S, or every maximal independent set of
/// the leftover two-hop subgraph leaves some member of S uninterfered.
inline bool is_feasible_set(const ConflictGraph& g, LinkId i, std::span<const LinkId> s,
                            FeasibilityContext* ctx = nullptr) {
    Bits s_bits = detail::ids_to_bits(g, s);
    if (!s_bits.test(static_cast<std::size_t>(g.index_of(i))))
        throw InputError("feasible-set candidate must contain link " + std::to_string(i));
    Bits outside = s_bits;
    outside.subtract(g.closed_neighborhood_bits(i));
    if (outside.any())
        throw InputError("feasible-set candidate exceeds the closed neighborhood of link " +
                         std::to_string(i));
    if (ctx) return ctx->feasible(i, s_bits);
    FeasibilityContext fresh(g);
    return fresh.feasible(i, s_bits);
}

/// Definition-level oracle: N times the minimum, over all maximal
/// independent sets of the whole graph, of how many members of S the MIS
/// contains. Exhaustive; guarded by a node cap.
inline std::int64_t min_scheduling_rate(const ConflictGraph& g, std::span<const LinkId> s,
                                        std::int64_t channels,
                                        std::size_t node_cap = 20) {
    if (g.node_count() > node_cap)
        throw CapacityError("min_scheduling_rate: graph has " + std::to_string(g.node_count()) +
                            " nodes, cap is " + std::to_string(node_cap));
    const Bits s_bits = detail::ids_to_bits(g, s);
    Bits all(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) all.set(v);
    std::size_t min_overlap = g.node_count() + 1;
    g.for_each_maximal_independent_set(all, [&](const Bits& mis) {
        const std::size_t overlap = (mis & s_bits).count();
        min_overlap = std::min(min_overlap, overlap);
        return min_overlap != 0; // cannot go below zero
    });
    return channels * static_cast<std::int64_t>(min_overlap);
}

/// Minimum-sum-density feasible set containing clique K around link i
/// (upper-bound search; the returned set is always genuinely feasible).
inline FeasibleSetResult min_density_feasible_set(const ConflictGraph& g, LinkId i,
                                                  std::span<const LinkId> clique,
                                                  const DensityMap& densities,
                                                  FeasibilityContext* ctx = nullptr) {
    FeasibilityContext fresh(g);
    FeasibilityContext& use = ctx ? *ctx : fresh;
    const Bits k_bits = detail::ids_to_bits(g, clique);
    detail::validate_clique_around(g, i, k_bits, use.closed_neighborhood(i));
    const auto dense = detail::DenseDensities::from_map(g, i, densities);
    return detail::MinDensitySearch(use, i, dense).run(k_bits);
}

/// Exhaustive oracle for the minimum-density feasible set: enumerates
/// every S with K ⊆ S ⊆ M_i ∪ {i} and tests each against the whole-graph
/// MIS family. Guarded by a node cap.
inline FeasibleSetResult feasible_set_bruteforce(const ConflictGraph& g, LinkId i,
                                                 std::span<const LinkId> clique,
                                                 const DensityMap& densities,
                                                 std::size_t node_cap = 14) {
    if (g.node_count() > node_cap)
        throw CapacityError("feasible_set_bruteforce: graph has " +
                            std::to_string(g.node_count()) + " nodes, cap is " +
                            std::to_string(node_cap));
    const Bits closed = g.closed_neighborhood_bits(i);
    const Bits k_bits = detail::ids_to_bits(g, clique);
    detail::validate_clique_around(g, i, k_bits, closed);
    const auto dense = detail::DenseDensities::from_map(g, i, densities);

    std::vector<Bits> mises;
    Bits all(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) all.set(v);
    g.for_each_maximal_independent_set(all, [&](const Bits& mis) {
        mises.push_back(mis);
        return true;
    });
    const auto feasible = [&](const Bits& s_bits) {
        for (const Bits& mis : mises)
            if (!mis.intersects(s_bits)) return false; // min scheduling rate is zero
        return true;
    };

    std::vector<std::size_t> free_verts;
    Bits free_bits = closed;
    free_bits.subtract(k_bits);
    free_bits.for_each_set([&](std::size_t v) { free_verts.push_back(v); });
    if (free_verts.size() > 24)
        throw CapacityError("feasible_set_bruteforce: neighborhood too large");

    std::optional<FeasibleSetResult> best;
    for (std::uint64_t pick = 0; pick < (1ULL << free_verts.size()); ++pick) {
        Bits s_bits = k_bits;
        for (std::size_t b = 0; b < free_verts.size(); ++b)
            if ((pick >> b) & 1) s_bits.set(free_verts[b]);
        if (!feasible(s_bits)) continue;
        const Rat u = dense.sum(s_bits);
        auto members = detail::bits_to_ids(g, s_bits);
        if (!best || u < best->sum_density ||
            (u == best->sum_density && members < best->members))
            best = FeasibleSetResult{std::move(members), u};
    }
    if (!best) throw InvariantError("no feasible superset found; contradicts Lemma 1");
    return *best;
}

namespace detail {

inline SchedulabilityVerdict analyze_link(const ConflictGraph& g, LinkId i,
                                          const TrafficMap& traffic, std::int64_t channels,
                                          FeasibilityContext* ctx) {
    FeasibilityContext fresh(g);
    FeasibilityContext& use = ctx ? *ctx : fresh;

    DensityMap densities;
    const Bits closed = g.closed_neighborhood_bits(i);
    closed.for_each_set([&](std::size_t v) {
        const LinkId id = g.id_of(static_cast<int>(v));
        const auto it = traffic.find(id);
        if (it == traffic.end())
            throw InputError("missing traffic entry for link " + std::to_string(id));
        densities.emplace(id, it->second.density());
    });
    const auto dense = DenseDensities::from_map(g, i, densities);

    SchedulabilityVerdict verdict;
    verdict.link = i;
    verdict.schedulable = true;

    const Rat channel_budget(channels);
    Rat max_min_u(0);
    Rat max_clique_util(0);
    std::size_t largest_clique = 0;
    std::size_t largest_min_set = 0;

    const auto& clique_ids = use.cliques(i);
    const auto& clique_bits = use.clique_bits(i);
    for (std::size_t c = 0; c < clique_ids.size(); ++c) {
        FeasibleSetResult found = MinDensitySearch(use, i, dense).run(clique_bits[c]);
        if (found.sum_density > channel_budget) verdict.schedulable = false;
        max_min_u = std::max(max_min_u, found.sum_density);
        largest_min_set = std::max(largest_min_set, found.members.size());
        largest_clique = std::max(largest_clique, clique_ids[c].size());

        Rat util(0);
        for (LinkId id : clique_ids[c]) util += traffic.at(id).utilization();
        max_clique_util = std::max(max_clique_util, util);

        verdict.per_clique.push_back(SchedulabilityVerdict::PerClique{
            clique_ids[c], found.sum_density, std::move(found.members)});
    }

    verdict.necessary_ok = max_clique_util <= channel_budget;
    verdict.delta = max_min_u > Rat(0) ? max_clique_util / max_min_u : Rat(0);
    verdict.delta_prime =
        largest_min_set > 0
            ? Rat(static_cast<std::int64_t>(largest_clique),
                  static_cast<std::int64_t>(largest_min_set))
            : Rat(0);
    return verdict;
}

} // namespace detail

/// Sufficient-condition test: link i is schedulable if, for every
/// maximal clique containing it, some feasible set has sum work density
/// at most the channel count.
inline SchedulabilityVerdict schedulability_test(const ConflictGraph& g, LinkId i,
                                                 const TrafficMap& traffic,
                                                 std::int64_t channels,
                                                 FeasibilityContext* ctx = nullptr) {
    if (channels < 1) throw InputError("channel count must be >= 1");
    return detail::analyze_link(g, i, traffic, channels, ctx);
}

/// Necessary condition: the per-clique utilization (X/T) sum may not
/// exceed the channel count for any clique containing i.
inline bool necessary_condition(const ConflictGraph& g, LinkId i, const TrafficMap& traffic,
                                std::int64_t channels, FeasibilityContext* ctx = nullptr) {
    FeasibilityContext fresh(g);
    FeasibilityContext& use = ctx ? *ctx : fresh;
    const Rat budget(channels);
    for (const auto& clique : use.cliques(i)) {
        Rat util(0);
        for (LinkId id : clique) {
            const auto it = traffic.find(id);
            if (it == traffic.end())
                throw InputError("missing traffic entry for link " + std::to_string(id));
            util += it->second.utilization();
        }
        if (util > budget) return false;
    }
    return true;
}

/// Lower bound on the approximation ratio (delta) and the topology
/// approximation ratio (delta') for link i.
inline std::pair<Rat, Rat> approximation_ratios(const ConflictGraph& g, LinkId i,
                                                const TrafficMap& traffic,
                                                FeasibilityContext* ctx = nullptr) {
    const SchedulabilityVerdict v = detail::analyze_link(g, i, traffic, 1, ctx);
    return {v.delta, v.delta_prime};
}

} // namespace ldp

#endif // LDP_SCHEDULABILITY_HPP
