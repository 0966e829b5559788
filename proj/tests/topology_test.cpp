#include <catch2/catch_amalgamated.hpp>

#include "ldp/io.hpp"
#include "ldp/topology.hpp"

using namespace ldp;

namespace {

double link_length_bound_lo(const DeploymentParams& p, LinkKind k) {
    switch (k) {
        case LinkKind::Uplink: return p.uplink_min;
        case LinkKind::Downlink: return p.downlink_min;
        default: return p.d2d_min;
    }
}

double link_length_bound_hi(const DeploymentParams& p, LinkKind k) {
    switch (k) {
        case LinkKind::Uplink: return p.uplink_max;
        case LinkKind::Downlink: return p.downlink_max;
        default: return p.d2d_max;
    }
}

} // namespace

TEST_CASE("network-1 preset reproduces node, cell and link counts") {
    const DeploymentParams params = network1_params(7);
    const Topology topo = generate_topology(params);

    int bs = 0, ue = 0;
    for (const NodePlacement& n : topo.nodes) {
        if (n.kind == NodeKind::BaseStation) ++bs;
        else ++ue;
        CHECK(n.x >= 0.0);
        CHECK(n.x <= params.region_width);
        CHECK(n.y >= 0.0);
        CHECK(n.y <= params.region_height);
    }
    CHECK(bs == 9);
    CHECK(ue == 91);
    CHECK(topo.links.size() == 83);
    CHECK(topo.graph.node_count() == 83);

    for (const PlacedLink& l : topo.links) {
        CHECK(l.length >= link_length_bound_lo(params, l.kind) - 1e-9);
        CHECK(l.length <= link_length_bound_hi(params, l.kind) + 1e-9);
        CHECK(l.exclusion_ratio >= params.exclusion_lo);
        CHECK(l.exclusion_ratio <= params.exclusion_hi);
    }
}

TEST_CASE("network-2 preset is denser than network 1") {
    const Topology t1 = generate_topology(network1_params(3));
    const Topology t2 = generate_topology(network2_params(3));
    CHECK(t2.links.size() == 163);
    const auto mean_degree = [](const Topology& t) {
        double sum = 0;
        for (const LinkId id : t.graph.link_ids())
            sum += static_cast<double>(t.graph.degree(id));
        return sum / static_cast<double>(t.graph.node_count());
    };
    CHECK(mean_degree(t2) > mean_degree(t1));
}

TEST_CASE("two nodes in one cell make a single isolated link") {
    DeploymentParams p;
    p.region_width = 400;
    p.region_height = 400;
    p.grid_rows = 1;
    p.grid_cols = 1;
    p.node_count = 2;
    p.target_link_count = 1;
    p.seed = 11;
    const Topology topo = generate_topology(p);
    CHECK(topo.links.size() == 1);
    CHECK(topo.graph.node_count() == 1);
    CHECK(topo.graph.neighbors(topo.links[0].id).empty());
}

TEST_CASE("generation is deterministic for a fixed seed") {
    const DeploymentParams params = network1_params(21);
    const Topology a = generate_topology(params);
    const Topology b = generate_topology(params);
    CHECK(topology_to_json(a).dump() == topology_to_json(b).dump());

    DeploymentParams other = params;
    other.seed = 22;
    const Topology c = generate_topology(other);
    CHECK(topology_to_json(a).dump() != topology_to_json(c).dump());
}

TEST_CASE("impossible geometry raises a generation error") {
    DeploymentParams p;
    p.region_width = 60;
    p.region_height = 60;
    p.grid_rows = 1;
    p.grid_cols = 1;
    p.node_count = 4;
    p.target_link_count = 4;
    // downlinks need 100..200 m but the region is only 60 m wide
    p.uplink_fraction = 0.0;
    p.d2d_fraction = 0.0;
    p.downlink_fraction = 1.0;
    p.max_retries = 50;
    CHECK_THROWS_AS(generate_topology(p), GenerationError);
}

TEST_CASE("deployment parameter validation") {
    DeploymentParams p;
    p.exclusion_lo = 0.5;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = DeploymentParams{};
    p.grid_rows = 0;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = DeploymentParams{};
    p.node_count = 0;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = DeploymentParams{};
    p.uplink_min = 120;
    p.uplink_max = 80;
    CHECK_THROWS_AS(p.validate(), InputError);
}
