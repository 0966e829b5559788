#ifndef LDP_CONFLICT_GRAPH_HPP
#define LDP_CONFLICT_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldp/bits.hpp"
#include "ldp/errors.hpp"

namespace ldp {

using LinkId = std::int32_t;

/// The maximal cliques of the closed neighborhood of `owner`, each of
/// which contains the owner (every neighbor is adjacent to the owner, so
/// no maximal clique of the induced closed neighborhood can omit it).
struct CliqueFamily {
    LinkId owner = 0;
    std::vector<std::vector<LinkId>> cliques; // each sorted; list in lexicographic order
};

/// Undirected interference graph over network links. Nodes are link ids,
/// an edge means the two links may not transmit on the same channel in
/// the same slot. Immutable after construction; all queries are pure.
class ConflictGraph {
public:
    ConflictGraph() = default;

    /// Builds and validates a graph. Rejects duplicate ids, non-positive
    /// ids, self-loops, duplicate edges and edges with unknown endpoints.
    static ConflictGraph from_edges(std::span<const LinkId> ids,
                                    std::span<const std::pair<LinkId, LinkId>> edges) {
        ConflictGraph g;
        g.ids_.assign(ids.begin(), ids.end());
        std::sort(g.ids_.begin(), g.ids_.end());
        for (std::size_t k = 0; k < g.ids_.size(); ++k) {
            if (g.ids_[k] <= 0)
                throw InputError("link id must be positive: " + std::to_string(g.ids_[k]));
            if (k > 0 && g.ids_[k] == g.ids_[k - 1])
                throw InputError("duplicate link id: " + std::to_string(g.ids_[k]));
            g.index_.emplace(g.ids_[k], static_cast<int>(k));
        }
        const std::size_t n = g.ids_.size();
        g.adj_.assign(n, Bits(n));
        for (const auto& [a, b] : edges) {
            const int ia = g.checked_index(a);
            const int ib = g.checked_index(b);
            if (ia == ib)
                throw InputError("self-loop on link " + std::to_string(a));
            if (g.adj_[static_cast<std::size_t>(ia)].test(static_cast<std::size_t>(ib)))
                throw InputError("duplicate conflict pair " + std::to_string(a) + "," +
                                 std::to_string(b));
            g.adj_[static_cast<std::size_t>(ia)].set(static_cast<std::size_t>(ib));
            g.adj_[static_cast<std::size_t>(ib)].set(static_cast<std::size_t>(ia));
        }
        return g;
    }

    std::size_t node_count() const { return ids_.size(); }
    const std::vector<LinkId>& link_ids() const { return ids_; }

    bool has_link(LinkId id) const { return index_.count(id) != 0; }

    int index_of(LinkId id) const { return checked_index(id); }
    LinkId id_of(int idx) const { return ids_[static_cast<std::size_t>(idx)]; }

    bool adjacent(LinkId a, LinkId b) const {
        return adj_[static_cast<std::size_t>(checked_index(a))]
            .test(static_cast<std::size_t>(checked_index(b)));
    }

    /// Adjacency mask of a dense index, over dense indices.
    const Bits& adjacency_bits(int idx) const { return adj_[static_cast<std::size_t>(idx)]; }

    std::size_t degree(LinkId id) const {
        return adj_[static_cast<std::size_t>(checked_index(id))].count();
    }

    /// M_i: the links interfering with i. Never contains i.
    std::vector<LinkId> neighbors(LinkId i) const {
        return to_ids(adj_[static_cast<std::size_t>(checked_index(i))]);
    }

    /// M_{i,2}: links at graph distance exactly two from i.
    std::vector<LinkId> two_hop_set(LinkId i) const { return to_ids(two_hop_bits(i)); }

    Bits neighbors_bits(LinkId i) const { return adj_[static_cast<std::size_t>(checked_index(i))]; }

    Bits two_hop_bits(LinkId i) const {
        const std::size_t idx = static_cast<std::size_t>(checked_index(i));
        Bits out(ids_.size());
        adj_[idx].for_each_set([&](std::size_t j) { out |= adj_[j]; });
        out.subtract(adj_[idx]);
        out.reset(idx);
        return out;
    }

    /// M_i ∪ {i} as a dense-index mask.
    Bits closed_neighborhood_bits(LinkId i) const {
        const std::size_t idx = static_cast<std::size_t>(checked_index(i));
        Bits out = adj_[idx];
        out.set(idx);
        return out;
    }

    /// All maximal cliques of the subgraph induced by M_i ∪ {i}; each
    /// contains i. Members sorted, list in lexicographic order.
    CliqueFamily cliques_containing(LinkId i) const {
        const Bits closed = closed_neighborhood_bits(i);
        const Local local = build_local(closed, /*complement=*/false);
        std::vector<std::vector<LinkId>> out;
        enumerate_bk(local, [&](const Bits& members_local) {
            out.push_back(local_to_ids(local, members_local));
            return true;
        });
        std::sort(out.begin(), out.end());
        return CliqueFamily{i, std::move(out)};
    }

    /// All maximal independent sets of the subgraph induced by `subset`.
    /// The empty subset yields a single empty set. Members sorted, list
    /// in lexicographic order.
    std::vector<std::vector<LinkId>> maximal_independent_sets(
        std::span<const LinkId> subset) const {
        Bits mask(ids_.size());
        for (LinkId id : subset) mask.set(static_cast<std::size_t>(checked_index(id)));
        std::vector<std::vector<LinkId>> out;
        const Local local = build_local(mask, /*complement=*/true);
        enumerate_bk(local, [&](const Bits& members_local) {
            out.push_back(local_to_ids(local, members_local));
            return true;
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Streams the maximal independent sets of the subgraph induced by
    /// `mask` (dense-index Bits) as dense-index Bits. The callback
    /// returns false to stop early; the function returns false iff
    /// enumeration was aborted.
    template <typename Fn>
    bool for_each_maximal_independent_set(const Bits& mask, Fn&& fn) const {
        const Local local = build_local(mask, /*complement=*/true);
        return enumerate_bk(local, [&](const Bits& members_local) {
            Bits global(ids_.size());
            members_local.for_each_set(
                [&](std::size_t v) { global.set(static_cast<std::size_t>(local.verts[v])); });
            return fn(global);
        });
    }

private:
    struct Local {
        std::vector<int> verts;       // dense indices, ascending
        std::vector<Bits> adj;        // local adjacency (possibly complemented)
    };

    int checked_index(LinkId id) const {
        const auto it = index_.find(id);
        if (it == index_.end())
            throw InputError("unknown link id: " + std::to_string(id));
        return it->second;
    }

    std::vector<LinkId> to_ids(const Bits& mask) const {
        std::vector<LinkId> out;
        out.reserve(mask.count());
        mask.for_each_set([&](std::size_t j) { out.push_back(ids_[j]); });
        return out;
    }

    std::vector<LinkId> local_to_ids(const Local& local, const Bits& members) const {
        std::vector<LinkId> out;
        out.reserve(members.count());
        members.for_each_set([&](std::size_t v) {
            out.push_back(ids_[static_cast<std::size_t>(local.verts[v])]);
        });
        return out;
    }

    Local build_local(const Bits& mask, bool complement) const {
        Local local;
        mask.for_each_set([&](std::size_t j) { local.verts.push_back(static_cast<int>(j)); });
        const std::size_t k = local.verts.size();
        local.adj.assign(k, Bits(k));
        for (std::size_t u = 0; u < k; ++u) {
            const Bits& row = adj_[static_cast<std::size_t>(local.verts[u])];
            for (std::size_t v = u + 1; v < k; ++v) {
                const bool edge = row.test(static_cast<std::size_t>(local.verts[v]));
                if (edge != complement) {
                    local.adj[u].set(v);
                    local.adj[v].set(u);
                }
            }
        }
        return local;
    }

    /// Bron-Kerbosch with pivoting over a local adjacency; enumerates
    /// maximal cliques of that adjacency. Deterministic: candidates are
    /// scanned in ascending index order and the pivot is the first vertex
    /// maximizing the candidate cover.
    template <typename Fn>
    static bool enumerate_bk(const Local& local, Fn&& emit) {
        const std::size_t k = local.verts.size();
        Bits r(k), p(k), x(k);
        for (std::size_t v = 0; v < k; ++v) p.set(v);
        return bk_rec(local, r, p, x, emit);
    }

    template <typename Fn>
    static bool bk_rec(const Local& local, Bits& r, Bits p, Bits x, Fn&& emit) {
        if (p.none() && x.none()) return emit(r);
        // pivot: vertex of P ∪ X covering the most of P
        std::size_t pivot = local.verts.size();
        std::size_t best = 0;
        bool have = false;
        const Bits pux = p | x;
        pux.for_each_set([&](std::size_t u) {
            const std::size_t c = (p & local.adj[u]).count();
            if (!have || c > best) {
                have = true;
                best = c;
                pivot = u;
            }
        });
        Bits ext = p;
        if (have) ext.subtract(local.adj[pivot]);
        bool go = true;
        ext.for_each_set([&](std::size_t v) {
            if (!go) return;
            r.set(v);
            if (!bk_rec(local, r, p & local.adj[v], x & local.adj[v], emit)) go = false;
            r.reset(v);
            p.reset(v);
            x.set(v);
        });
        return go;
    }

    std::vector<LinkId> ids_;
    std::unordered_map<LinkId, int> index_;
    std::vector<Bits> adj_;
};

} // namespace ldp

#endif // LDP_CONFLICT_GRAPH_HPP
