#include <catch2/catch_amalgamated.hpp>

#include "ldp/schedulability.hpp"
#include "test_support.hpp"

using namespace ldp;
using test::make_ex8;

namespace {

std::vector<LinkId> ids(std::initializer_list<LinkId> v) { return {v}; }

/// All feasible supersets of a clique, by definition-level brute force.
std::vector<std::vector<LinkId>> feasible_family(const ConflictGraph& g, LinkId i,
                                                 const std::vector<LinkId>& clique) {
    std::vector<LinkId> free;
    auto closed = g.neighbors(i);
    closed.push_back(i);
    std::sort(closed.begin(), closed.end());
    for (const LinkId v : closed)
        if (std::find(clique.begin(), clique.end(), v) == clique.end()) free.push_back(v);
    std::vector<std::vector<LinkId>> out;
    for (std::uint64_t pick = 0; pick < (1ULL << free.size()); ++pick) {
        std::vector<LinkId> s = clique;
        for (std::size_t b = 0; b < free.size(); ++b)
            if ((pick >> b) & 1) s.push_back(free[b]);
        std::sort(s.begin(), s.end());
        if (min_scheduling_rate(g, s, 1) == 1) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("Theorem-3 feasibility on the fixture") {
    const ConflictGraph g = make_ex8();
    CHECK(is_feasible_set(g, 1, ids({1, 3, 4, 5})));
    CHECK_FALSE(is_feasible_set(g, 1, ids({1, 3, 4})));
    for (const LinkId i : g.link_ids()) {
        auto closed = g.neighbors(i);
        closed.push_back(i);
        CHECK(is_feasible_set(g, i, closed)); // Lemma 1
    }
}

TEST_CASE("feasibility preconditions") {
    const ConflictGraph g = make_ex8();
    CHECK_THROWS_AS(is_feasible_set(g, 1, ids({3, 4})), InputError);    // missing i
    CHECK_THROWS_AS(is_feasible_set(g, 1, ids({1, 6})), InputError);    // outside M_1
    CHECK_THROWS_AS(is_feasible_set(g, 1, ids({1, 99})), InputError);   // unknown id
}

TEST_CASE("minimum scheduling rate oracle") {
    const ConflictGraph g = make_ex8();
    CHECK(min_scheduling_rate(g, ids({1, 3, 4}), 2) == 0);
    CHECK(min_scheduling_rate(g, g.link_ids(), 1) == 2); // {1,6} is a smallest MIS

    const ConflictGraph lone = test::make_single(4);
    CHECK(min_scheduling_rate(lone, ids({4}), 3) == 3);

    Rng rng(5);
    const ConflictGraph big = test::random_connected_graph(rng, 21, 0.2);
    CHECK_THROWS_AS(min_scheduling_rate(big, big.link_ids(), 1), CapacityError);
}

TEST_CASE("feasible-set family around a clique matches the quoted facts") {
    const ConflictGraph g = make_ex8();
    CHECK(feasible_family(g, 1, ids({1, 3, 4})) ==
          std::vector<std::vector<LinkId>>{{1, 2, 3, 4}, {1, 3, 4, 5}, {1, 2, 3, 4, 5}});
    // the first clique is itself feasible
    const auto fam1 = feasible_family(g, 1, ids({1, 2, 3}));
    CHECK(std::find(fam1.begin(), fam1.end(), ids({1, 2, 3})) != fam1.end());
}

TEST_CASE("minimum-density feasible set on the fixture") {
    const ConflictGraph g = make_ex8();
    const DensityMap quarter = test::uniform_densities(g, 1, 4);

    const FeasibleSetResult a = min_density_feasible_set(g, 1, ids({1, 2, 3}), quarter);
    CHECK(a.members == ids({1, 2, 3}));
    CHECK(a.sum_density == Rat(3, 4));

    const FeasibleSetResult b = min_density_feasible_set(g, 1, ids({1, 3, 4}), quarter);
    CHECK(b.sum_density == Rat(1));
    const bool expected_members =
        b.members == ids({1, 2, 3, 4}) || b.members == ids({1, 3, 4, 5});
    CHECK(expected_members);

    const ConflictGraph lone = test::make_single(9);
    DensityMap d;
    d.emplace(9, Rat(7, 10));
    const FeasibleSetResult c = min_density_feasible_set(lone, 9, ids({9}), d);
    CHECK(c.members == ids({9}));
    CHECK(c.sum_density == Rat(7, 10));

    CHECK_THROWS_AS(min_density_feasible_set(g, 1, ids({1, 2, 4}), quarter), InputError);
    CHECK_THROWS_AS(min_density_feasible_set(g, 1, ids({3, 4}), quarter), InputError);
}

TEST_CASE("brute-force minimum matches the quoted values") {
    const ConflictGraph g = make_ex8();
    const DensityMap quarter = test::uniform_densities(g, 1, 4);

    CHECK(feasible_set_bruteforce(g, 1, ids({1, 3, 4}), quarter).sum_density == Rat(1));
    CHECK(feasible_set_bruteforce(g, 1, ids({1, 2, 3}), quarter).sum_density == Rat(3, 4));

    auto closed = g.neighbors(1);
    closed.push_back(1);
    std::sort(closed.begin(), closed.end());
    const FeasibleSetResult whole = feasible_set_bruteforce(g, 1, closed, quarter);
    CHECK(whole.members == closed);

    Rng rng(5);
    const ConflictGraph big = test::random_connected_graph(rng, 16, 0.2);
    CHECK_THROWS_AS(
        feasible_set_bruteforce(big, big.link_ids().front(),
                                ids({big.link_ids().front()}),
                                test::uniform_densities(big, 1, 4)),
        CapacityError);
}

TEST_CASE("schedulability verdicts") {
    const ConflictGraph lone = test::make_single(2);
    const TrafficMap lone_traffic =
        make_traffic_map(test::uniform_traffic(lone, 10, 10, 8));
    const SchedulabilityVerdict lv = schedulability_test(lone, 2, lone_traffic, 1);
    CHECK(lv.schedulable);
    CHECK(lv.necessary_ok);
    CHECK(lv.delta == Rat(1));
    CHECK(lv.delta_prime == Rat(1));

    const ConflictGraph g = make_ex8();
    const TrafficMap quarter = make_traffic_map(test::uniform_traffic(g, 4, 4, 1));
    const SchedulabilityVerdict v1 = schedulability_test(g, 1, quarter, 1);
    CHECK(v1.schedulable);
    CHECK(v1.necessary_ok);
    CHECK(v1.delta == Rat(3, 4));
    CHECK(v1.delta_prime == Rat(3, 4));
    Rat max_u(0);
    for (const auto& pc : v1.per_clique) max_u = std::max(max_u, pc.min_density);
    CHECK(max_u == Rat(1));

    const ConflictGraph tri = test::make_triangle();
    const TrafficMap half = make_traffic_map(test::uniform_traffic(tri, 10, 10, 5));
    CHECK_FALSE(schedulability_test(tri, 1, half, 1).schedulable);

    TrafficMap missing = quarter;
    missing.erase(3);
    CHECK_THROWS_AS(schedulability_test(g, 1, missing, 1), InputError);
    CHECK_THROWS_AS(schedulability_test(g, 1, quarter, 0), InputError);
}

TEST_CASE("necessary condition") {
    const ConflictGraph tri = test::make_triangle();
    const TrafficMap half = make_traffic_map(test::uniform_traffic(tri, 10, 10, 5));
    CHECK_FALSE(necessary_condition(tri, 1, half, 1));

    const ConflictGraph lone = test::make_single(1);
    const TrafficMap t = make_traffic_map(test::uniform_traffic(lone, 10, 10, 8));
    CHECK(necessary_condition(lone, 1, t, 1));

    const ConflictGraph g = make_ex8();
    const TrafficMap quarter = make_traffic_map(test::uniform_traffic(g, 4, 4, 1));
    CHECK(necessary_condition(g, 1, quarter, 1));
}

TEST_CASE("approximation ratios stay within [0,1] and hit the fixture values") {
    const ConflictGraph g = make_ex8();
    const TrafficMap quarter = make_traffic_map(test::uniform_traffic(g, 4, 4, 1));
    const auto [delta, delta_prime] = approximation_ratios(g, 1, quarter);
    CHECK(delta == Rat(3, 4));
    CHECK(delta_prime == Rat(3, 4));

    Rng rng(31);
    for (int round = 0; round < 10; ++round) {
        const int n = static_cast<int>(rng.uniform_int(3, 10));
        const ConflictGraph rg = test::random_connected_graph(rng, n, 0.4);
        std::vector<LinkTraffic> traffic;
        for (const LinkId id : rg.link_ids()) {
            const SlotIndex d = rng.uniform_int(10, 40);
            const SlotIndex t = d + rng.uniform_int(0, d / 6);
            const std::int64_t x = rng.uniform_int(1, (5 * d) / 6);
            traffic.push_back(make_link_traffic(id, t, d, reliability_for(0.9, x), 0.9, 0, x));
        }
        const TrafficMap map = make_traffic_map(traffic);
        for (const LinkId i : rg.link_ids()) {
            const auto [dl, dp] = approximation_ratios(rg, i, map);
            CHECK(dl <= Rat(1));
            CHECK(dl > Rat(0));
            CHECK(dp <= Rat(1));
            CHECK(dp > Rat(0));
        }
    }
}

TEST_CASE("schedulable implies the necessary condition") {
    Rng rng(77);
    for (int round = 0; round < 12; ++round) {
        const int n = static_cast<int>(rng.uniform_int(3, 9));
        const ConflictGraph g = test::random_connected_graph(rng, n, 0.45);
        std::vector<LinkTraffic> traffic;
        for (const LinkId id : g.link_ids()) {
            const SlotIndex d = rng.uniform_int(6, 20);
            const std::int64_t x = rng.uniform_int(1, d);
            traffic.push_back(make_link_traffic(id, d, d, reliability_for(0.9, x), 0.9, 0, x));
        }
        const TrafficMap map = make_traffic_map(traffic);
        FeasibilityContext ctx(g);
        for (const LinkId i : g.link_ids()) {
            const auto v = schedulability_test(g, i, map, 2, &ctx);
            if (v.schedulable) CHECK(v.necessary_ok);
        }
    }
}

TEST_CASE("Theorem-3 check agrees with the definition-level oracle") {
    Rng rng(2024);
    for (int round = 0; round < 30; ++round) {
        const int n = static_cast<int>(rng.uniform_int(4, 12));
        const double p = rng.uniform_real(0.2, 0.6);
        const ConflictGraph g = test::random_connected_graph(rng, n, p);
        FeasibilityContext ctx(g);
        for (const LinkId i : g.link_ids()) {
            auto nb = g.neighbors(i);
            for (int s = 0; s < 10; ++s) {
                std::vector<LinkId> cand{i};
                for (const LinkId v : nb)
                    if (rng.bernoulli(0.5)) cand.push_back(v);
                std::sort(cand.begin(), cand.end());
                const bool fast = is_feasible_set(g, i, cand, &ctx);
                const bool slow = min_scheduling_rate(g, cand, 3) == 3;
                CHECK(fast == slow);
            }
        }
    }
}

TEST_CASE("feasibility is monotone under adding and removing links") {
    Rng rng(555);
    for (int round = 0; round < 20; ++round) {
        const int n = static_cast<int>(rng.uniform_int(4, 11));
        const ConflictGraph g = test::random_connected_graph(rng, n, 0.4);
        FeasibilityContext ctx(g);
        const LinkId i = g.link_ids()[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(g.node_count()) - 1))];
        const auto nb = g.neighbors(i);
        std::vector<LinkId> cand{i};
        for (const LinkId v : nb)
            if (rng.bernoulli(0.5)) cand.push_back(v);
        std::sort(cand.begin(), cand.end());
        if (is_feasible_set(g, i, cand, &ctx)) {
            for (const LinkId v : nb) {
                if (std::find(cand.begin(), cand.end(), v) != cand.end()) continue;
                auto grown = cand;
                grown.push_back(v);
                std::sort(grown.begin(), grown.end());
                CHECK(is_feasible_set(g, i, grown, &ctx));
            }
        } else {
            for (const LinkId v : cand) {
                if (v == i) continue;
                std::vector<LinkId> shrunk;
                for (const LinkId w : cand)
                    if (w != v) shrunk.push_back(w);
                CHECK_FALSE(is_feasible_set(g, i, shrunk, &ctx));
            }
        }
    }
}

TEST_CASE("search result is always a genuine feasible set bounding the optimum") {
    Rng rng(808);
    for (int round = 0; round < 15; ++round) {
        const int n = static_cast<int>(rng.uniform_int(4, 11));
        const ConflictGraph g = test::random_connected_graph(rng, n, 0.35);
        DensityMap densities;
        for (const LinkId id : g.link_ids())
            densities.emplace(id, Rat(rng.uniform_int(1, 9), rng.uniform_int(10, 20)));
        FeasibilityContext ctx(g);
        for (const LinkId i : g.link_ids()) {
            for (const auto& clique : g.cliques_containing(i).cliques) {
                const FeasibleSetResult got =
                    min_density_feasible_set(g, i, clique, densities, &ctx);
                CHECK(is_feasible_set(g, i, got.members, &ctx));
                for (const LinkId k : clique)
                    CHECK(std::find(got.members.begin(), got.members.end(), k) !=
                          got.members.end());
                const FeasibleSetResult best =
                    feasible_set_bruteforce(g, i, clique, densities);
                CHECK(got.sum_density >= best.sum_density);
            }
        }
    }
}

TEST_CASE("context memoization keeps verdicts stable and counts checks") {
    const ConflictGraph g = make_ex8();
    const TrafficMap quarter = make_traffic_map(test::uniform_traffic(g, 4, 4, 1));
    FeasibilityContext ctx(g);
    const auto first = schedulability_test(g, 1, quarter, 1, &ctx);
    const auto checks_after_first = ctx.stats().theorem3_checks;
    const auto evals_after_first = ctx.stats().theorem3_evals;
    CHECK(checks_after_first > 0);
    const auto second = schedulability_test(g, 1, quarter, 1, &ctx);
    CHECK(first.schedulable == second.schedulable);
    CHECK(first.delta == second.delta);
    CHECK(ctx.stats().theorem3_checks > checks_after_first);
    CHECK(ctx.stats().theorem3_evals == evals_after_first); // all hits the second time
}
