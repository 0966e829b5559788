#include <catch2/catch_amalgamated.hpp>

#include "ldp/conflict_graph.hpp"
#include "ldp/random.hpp"
#include "test_support.hpp"

using namespace ldp;
using test::make_ex8;

namespace {

std::vector<LinkId> sorted(std::vector<LinkId> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("neighbors on the eight-link fixture") {
    const ConflictGraph g = make_ex8();
    CHECK(g.neighbors(1) == std::vector<LinkId>{2, 3, 4, 5});
    CHECK(g.neighbors(6) == std::vector<LinkId>{5, 7, 8});
    CHECK_THROWS_AS(g.neighbors(42), InputError);
}

TEST_CASE("isolated node has no neighbors") {
    const std::vector<LinkId> ids{1, 2, 7};
    const std::vector<std::pair<LinkId, LinkId>> edges{{1, 2}};
    const ConflictGraph g = ConflictGraph::from_edges(ids, edges);
    CHECK(g.neighbors(7).empty());
}

TEST_CASE("two-hop sets") {
    const ConflictGraph g = make_ex8();
    CHECK(g.two_hop_set(1) == std::vector<LinkId>{6, 7, 8});
    CHECK(g.two_hop_set(4) == std::vector<LinkId>{2, 6, 8});

    const ConflictGraph k4 = test::make_complete(4);
    for (const LinkId id : k4.link_ids()) CHECK(k4.two_hop_set(id).empty());
}

TEST_CASE("cliques containing a link") {
    const ConflictGraph g = make_ex8();
    const CliqueFamily f1 = g.cliques_containing(1);
    CHECK(f1.owner == 1);
    CHECK(f1.cliques == std::vector<std::vector<LinkId>>{{1, 2, 3}, {1, 3, 4}, {1, 4, 5}});
    const CliqueFamily f6 = g.cliques_containing(6);
    CHECK(f6.cliques == std::vector<std::vector<LinkId>>{{5, 6}, {6, 7, 8}});

    const ConflictGraph lone = test::make_single(3);
    CHECK(lone.cliques_containing(3).cliques == std::vector<std::vector<LinkId>>{{3}});
}

TEST_CASE("maximal independent sets on fixtures") {
    const ConflictGraph g = make_ex8();
    const std::vector<LinkId> sub{2, 6, 7, 8};
    CHECK(g.maximal_independent_sets(sub) ==
          std::vector<std::vector<LinkId>>{{2, 6}, {2, 7}, {2, 8}});

    const auto all_mis = g.maximal_independent_sets(g.link_ids());
    const auto has = [&](std::vector<LinkId> s) {
        return std::find(all_mis.begin(), all_mis.end(), s) != all_mis.end();
    };
    CHECK(has({2, 5, 8}));
    CHECK(has({1, 6}));

    const ConflictGraph tri = test::make_triangle();
    CHECK(tri.maximal_independent_sets(tri.link_ids()) ==
          std::vector<std::vector<LinkId>>{{1}, {2}, {3}});

    CHECK(g.maximal_independent_sets(std::vector<LinkId>{}) ==
          std::vector<std::vector<LinkId>>{{}});
}

TEST_CASE("construction validation") {
    const std::vector<LinkId> ids{1, 2, 3};
    using E = std::vector<std::pair<LinkId, LinkId>>;
    CHECK_THROWS_AS(ConflictGraph::from_edges(ids, E{{1, 1}}), InputError);
    CHECK_THROWS_AS(ConflictGraph::from_edges(ids, E{{1, 9}}), InputError);
    CHECK_THROWS_AS(ConflictGraph::from_edges(ids, E{{1, 2}, {2, 1}}), InputError);
    const std::vector<LinkId> dup{1, 2, 2};
    CHECK_THROWS_AS(ConflictGraph::from_edges(dup, E{}), InputError);
    const std::vector<LinkId> nonpos{0, 1};
    CHECK_THROWS_AS(ConflictGraph::from_edges(nonpos, E{}), InputError);
}

TEST_CASE("MIS enumeration matches the exhaustive oracle on random graphs") {
    Rng rng(20240713);
    for (int round = 0; round < 40; ++round) {
        const int n = static_cast<int>(rng.uniform_int(2, 12));
        const double p = rng.uniform_real(0.1, 0.7);
        const ConflictGraph g = test::random_connected_graph(rng, n, p);

        CHECK(g.maximal_independent_sets(g.link_ids()) == test::naive_mis(g, g.link_ids()));

        // and on a random induced subset
        std::vector<LinkId> subset;
        for (const LinkId id : g.link_ids())
            if (rng.bernoulli(0.6)) subset.push_back(id);
        CHECK(g.maximal_independent_sets(subset) == test::naive_mis(g, subset));
    }
}

TEST_CASE("two-hop set is disjoint from the closed neighborhood") {
    Rng rng(7);
    for (int round = 0; round < 25; ++round) {
        const int n = static_cast<int>(rng.uniform_int(2, 14));
        const ConflictGraph g = test::random_connected_graph(rng, n, 0.3);
        for (const LinkId i : g.link_ids()) {
            const auto two = g.two_hop_set(i);
            const auto nb = g.neighbors(i);
            for (const LinkId v : two) {
                CHECK(v != i);
                CHECK(std::find(nb.begin(), nb.end(), v) == nb.end());
                // distance exactly two: some neighbor of i is adjacent to v
                bool via = false;
                for (const LinkId m : nb)
                    if (g.adjacent(m, v)) via = true;
                CHECK(via);
            }
        }
    }
}

TEST_CASE("clique family properties on random graphs") {
    Rng rng(99);
    for (int round = 0; round < 25; ++round) {
        const int n = static_cast<int>(rng.uniform_int(2, 12));
        const ConflictGraph g = test::random_connected_graph(rng, n, 0.4);
        for (const LinkId i : g.link_ids()) {
            const CliqueFamily fam = g.cliques_containing(i);
            std::vector<LinkId> covered;
            for (const auto& clique : fam.cliques) {
                CHECK(std::find(clique.begin(), clique.end(), i) != clique.end());
                for (std::size_t a = 0; a < clique.size(); ++a)
                    for (std::size_t b = a + 1; b < clique.size(); ++b)
                        CHECK(g.adjacent(clique[a], clique[b]));
                // maximal within the closed neighborhood
                const auto closed = sorted([&] {
                    auto v = g.neighbors(i);
                    v.push_back(i);
                    return v;
                }());
                for (const LinkId v : closed) {
                    if (std::find(clique.begin(), clique.end(), v) != clique.end()) continue;
                    bool adj_all = true;
                    for (const LinkId c : clique)
                        if (!g.adjacent(v, c)) { adj_all = false; break; }
                    CHECK_FALSE(adj_all);
                }
                covered.insert(covered.end(), clique.begin(), clique.end());
            }
            // the family covers M_i and i
            auto closed = g.neighbors(i);
            closed.push_back(i);
            std::sort(covered.begin(), covered.end());
            covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
            CHECK(covered == sorted(closed));
        }
    }
}

TEST_CASE("MIS members are independent and maximal") {
    Rng rng(1234);
    for (int round = 0; round < 15; ++round) {
        const int n = static_cast<int>(rng.uniform_int(3, 14));
        const ConflictGraph g = test::random_connected_graph(rng, n, 0.35);
        std::vector<LinkId> subset;
        for (const LinkId id : g.link_ids())
            if (rng.bernoulli(0.7)) subset.push_back(id);
        for (const auto& mis : g.maximal_independent_sets(subset)) {
            for (std::size_t a = 0; a < mis.size(); ++a)
                for (std::size_t b = a + 1; b < mis.size(); ++b)
                    CHECK_FALSE(g.adjacent(mis[a], mis[b]));
            for (const LinkId v : subset) {
                if (std::find(mis.begin(), mis.end(), v) != mis.end()) continue;
                bool blocked = false;
                for (const LinkId m : mis)
                    if (g.adjacent(v, m)) { blocked = true; break; }
                CHECK(blocked);
            }
        }
    }
}
