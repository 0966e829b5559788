#ifndef LDP_TEST_SUPPORT_HPP
#define LDP_TEST_SUPPORT_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "ldp/conflict_graph.hpp"
#include "ldp/random.hpp"
#include "ldp/rational.hpp"
#include "ldp/schedulability.hpp"
#include "ldp/traffic.hpp"

namespace ldp::test {

/// Eight-link fixture reconstructed from the worked example; every fact
/// asserted about it is re-derived by brute force in the test suites.
inline std::vector<std::pair<LinkId, LinkId>> ex8_edges() {
    return {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {3, 4}, {4, 5},
            {3, 8}, {4, 7}, {5, 6}, {6, 7}, {6, 8}, {7, 8}};
}

inline ConflictGraph make_ex8() {
    const std::vector<LinkId> ids{1, 2, 3, 4, 5, 6, 7, 8};
    const auto edges = ex8_edges();
    return ConflictGraph::from_edges(ids, edges);
}

inline ConflictGraph make_triangle() {
    const std::vector<LinkId> ids{1, 2, 3};
    const std::vector<std::pair<LinkId, LinkId>> edges{{1, 2}, {1, 3}, {2, 3}};
    return ConflictGraph::from_edges(ids, edges);
}

inline ConflictGraph make_complete(int n) {
    std::vector<LinkId> ids;
    std::vector<std::pair<LinkId, LinkId>> edges;
    for (int a = 1; a <= n; ++a) {
        ids.push_back(a);
        for (int b = a + 1; b <= n; ++b) edges.emplace_back(a, b);
    }
    return ConflictGraph::from_edges(ids, edges);
}

inline ConflictGraph make_single(LinkId id = 1) {
    const std::vector<LinkId> ids{id};
    return ConflictGraph::from_edges(ids, {});
}

inline bool graph_connected(const ConflictGraph& g) {
    if (g.node_count() == 0) return true;
    std::vector<char> seen(g.node_count(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        g.adjacency_bits(v).for_each_set([&](std::size_t u) {
            if (!seen[u]) {
                seen[u] = 1;
                ++visited;
                stack.push_back(static_cast<int>(u));
            }
        });
    }
    return visited == g.node_count();
}

/// G(n, p) with ids 1..n; redraws until connected.
inline ConflictGraph random_connected_graph(Rng& rng, int n, double edge_prob) {
    for (;;) {
        std::vector<LinkId> ids;
        std::vector<std::pair<LinkId, LinkId>> edges;
        for (int a = 1; a <= n; ++a) {
            ids.push_back(a);
            for (int b = a + 1; b <= n; ++b)
                if (rng.bernoulli(edge_prob)) edges.emplace_back(a, b);
        }
        ConflictGraph g = ConflictGraph::from_edges(ids, edges);
        if (graph_connected(g)) return g;
    }
}

/// All maximal independent sets by checking every subset: the 2^n oracle
/// the fast enumerator is measured against.
inline std::vector<std::vector<LinkId>> naive_mis(const ConflictGraph& g,
                                                  const std::vector<LinkId>& subset) {
    std::vector<std::vector<LinkId>> out;
    const std::size_t n = subset.size();
    for (std::uint64_t pick = 0; pick < (1ULL << n); ++pick) {
        std::vector<LinkId> cand;
        for (std::size_t b = 0; b < n; ++b)
            if ((pick >> b) & 1) cand.push_back(subset[b]);
        bool independent = true;
        for (std::size_t a = 0; a < cand.size() && independent; ++a)
            for (std::size_t b = a + 1; b < cand.size() && independent; ++b)
                if (g.adjacent(cand[a], cand[b])) independent = false;
        if (!independent) continue;
        bool maximal = true;
        for (std::size_t b = 0; b < n && maximal; ++b) {
            const LinkId v = subset[b];
            if (std::find(cand.begin(), cand.end(), v) != cand.end()) continue;
            bool clash = false;
            for (const LinkId c : cand)
                if (g.adjacent(v, c)) { clash = true; break; }
            if (!clash) maximal = false;
        }
        if (maximal) out.push_back(cand);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline DensityMap uniform_densities(const ConflictGraph& g, std::int64_t num,
                                    std::int64_t den) {
    DensityMap d;
    for (const LinkId id : g.link_ids()) d.emplace(id, Rat(num, den));
    return d;
}

/// Uniform consistent traffic: same (T, D, X) on every link, reliability
/// requirement derived from X.
inline std::vector<LinkTraffic> uniform_traffic(const ConflictGraph& g, SlotIndex period,
                                                SlotIndex deadline, std::int64_t demand,
                                                double p = 0.5) {
    std::vector<LinkTraffic> out;
    for (const LinkId id : g.link_ids())
        out.push_back(make_link_traffic(id, period, deadline, reliability_for(p, demand), p,
                                        0, demand));
    return out;
}

} // namespace ldp::test

#endif // LDP_TEST_SUPPORT_HPP
