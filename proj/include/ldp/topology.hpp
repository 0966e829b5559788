#ifndef LDP_TOPOLOGY_HPP
#define LDP_TOPOLOGY_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldp/conflict_graph.hpp"
#include "ldp/errors.hpp"
#include "ldp/random.hpp"

namespace ldp {

enum class NodeKind : std::uint8_t { BaseStation, UserEquipment };
enum class LinkKind : std::uint8_t { Uplink, Downlink, D2d };

struct NodePlacement {
    int id = 0;
    NodeKind kind = NodeKind::UserEquipment;
    double x = 0.0;
    double y = 0.0;
};

struct PlacedLink {
    LinkId id = 0;
    int tx_node = 0;
    int rx_node = 0;
    LinkKind kind = LinkKind::Uplink;
    double length = 0.0;
    double exclusion_ratio = 1.5;
};

struct DeploymentParams {
    double region_width = 1200.0;
    double region_height = 1200.0;
    int grid_rows = 3;
    int grid_cols = 3;
    int node_count = 91; // user equipment; one base station per cell is added
    double uplink_min = 50.0, uplink_max = 100.0;
    double downlink_min = 100.0, downlink_max = 200.0;
    double d2d_min = 50.0, d2d_max = 100.0;
    double exclusion_lo = 1.5, exclusion_hi = 2.0;
    double uplink_fraction = 0.41;
    double downlink_fraction = 0.41;
    double d2d_fraction = 0.18;
    std::int64_t channels = 4; // N
    std::optional<int> target_link_count;
    std::uint64_t seed = 1;
    int max_retries = 256;

    void validate() const {
        if (region_width <= 0 || region_height <= 0)
            throw InputError("region dimensions must be positive");
        if (grid_rows < 1 || grid_cols < 1) throw InputError("grid must be at least 1x1");
        if (node_count < 1) throw InputError("node count must be >= 1");
        if (!(exclusion_lo >= 1.0 && exclusion_lo <= exclusion_hi))
            throw InputError("exclusion ratio range must satisfy 1 <= lo <= hi");
        if (uplink_min <= 0 || uplink_min > uplink_max || downlink_min <= 0 ||
            downlink_min > downlink_max || d2d_min <= 0 || d2d_min > d2d_max)
            throw InputError("link length ranges must be positive and ordered");
        if (uplink_fraction < 0 || downlink_fraction < 0 || d2d_fraction < 0 ||
            uplink_fraction + downlink_fraction + d2d_fraction <= 0)
            throw InputError("link class fractions must be non-negative and not all zero");
        if (channels < 1) throw InputError("channel count must be >= 1");
        if (target_link_count && *target_link_count < 1)
            throw InputError("target link count must be >= 1");
    }
};

/// Paper-scale presets: 91 nodes over 1200x1200 m in a 3x3 grid with 83
/// links, and the denser 151-node, 163-link deployment over 1200x1500 m
/// in a 3x4 grid.
inline DeploymentParams network1_params(std::uint64_t seed = 1) {
    DeploymentParams p;
    p.seed = seed;
    p.target_link_count = 83;
    return p;
}

inline DeploymentParams network2_params(std::uint64_t seed = 1) {
    DeploymentParams p;
    p.region_width = 1200.0;
    p.region_height = 1500.0;
    p.grid_rows = 4;
    p.grid_cols = 3;
    p.node_count = 151;
    p.target_link_count = 163;
    p.seed = seed;
    return p;
}

struct Topology {
    DeploymentParams params;
    std::vector<NodePlacement> nodes;
    std::vector<PlacedLink> links;
    ConflictGraph graph;
};

namespace detail {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline bool in_region(const DeploymentParams& p, const Point& pt) {
    return pt.x >= 0.0 && pt.x <= p.region_width && pt.y >= 0.0 && pt.y <= p.region_height;
}

/// Uniform point in the annulus [rmin, rmax] around c (area-uniform).
inline Point annulus_point(Rng& rng, const Point& c, double rmin, double rmax) {
    const double u = rng.uniform_real(0.0, 1.0);
    const double r = std::sqrt(rmin * rmin + u * (rmax * rmax - rmin * rmin));
    const double theta = rng.uniform_real(0.0, 2.0 * std::numbers::pi);
    return Point{c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
}

} // namespace detail

/// Random multi-cell deployment: base stations at cell centers, user
/// equipment placed so that every link's length falls in its class
/// range, conflicts from mutual exclusion-disc tests. Deterministic for
/// a given rng state.
inline Topology generate_topology(const DeploymentParams& params, Rng& rng) {
    params.validate();
    using detail::Point;

    Topology topo;
    topo.params = params;

    const int cells = params.grid_rows * params.grid_cols;
    std::vector<Point> bs_pos;
    const double cell_w = params.region_width / params.grid_cols;
    const double cell_h = params.region_height / params.grid_rows;
    for (int r = 0; r < params.grid_rows; ++r)
        for (int c = 0; c < params.grid_cols; ++c) {
            const Point pt{(c + 0.5) * cell_w, (r + 0.5) * cell_h};
            bs_pos.push_back(pt);
            topo.nodes.push_back(NodePlacement{static_cast<int>(topo.nodes.size()) + 1,
                                               NodeKind::BaseStation, pt.x, pt.y});
        }

    // Link plan: d2d links consume two fresh UEs, cellular links one.
    // With a target link count L and n UEs, n-L d2d links consume the
    // budget exactly; extra links beyond n reuse already-placed UEs.
    const int n = params.node_count;
    const double cell_frac = params.uplink_fraction + params.downlink_fraction;
    const double all_frac = cell_frac + params.d2d_fraction;
    int link_target;
    if (params.target_link_count) {
        link_target = *params.target_link_count;
    } else {
        // every UE consumed: expected links = n * (1 - d2d_share/2)
        const double d2d_share = params.d2d_fraction / all_frac;
        link_target = std::max(1, static_cast<int>(std::lround(n * (1.0 - d2d_share / 2.0))));
    }
    int d2d_links = std::clamp(n - link_target, 0, link_target);
    int fresh_cellular = std::min(link_target - d2d_links, n - 2 * d2d_links);
    int reused_links = link_target - d2d_links - fresh_cellular;
    int uplinks = cell_frac > 0
                      ? static_cast<int>(std::lround(fresh_cellular * params.uplink_fraction /
                                                     cell_frac))
                      : 0;
    int downlinks = fresh_cellular - uplinks;

    std::vector<Point> link_tx, link_rx;
    std::vector<int> ue_nodes; // node ids of placed UEs

    const auto add_node = [&](const Point& pt) {
        const int id = static_cast<int>(topo.nodes.size()) + 1;
        topo.nodes.push_back(NodePlacement{id, NodeKind::UserEquipment, pt.x, pt.y});
        ue_nodes.push_back(id);
        return id;
    };
    const auto add_link = [&](int tx, const Point& txp, int rx, const Point& rxp, LinkKind kind) {
        PlacedLink l;
        l.id = static_cast<LinkId>(topo.links.size()) + 1;
        l.tx_node = tx;
        l.rx_node = rx;
        l.kind = kind;
        l.length = detail::dist(txp, rxp);
        topo.links.push_back(l);
        link_tx.push_back(txp);
        link_rx.push_back(rxp);
    };

    const auto place_near_bs = [&](double rmin, double rmax) -> std::pair<int, Point> {
        for (int attempt = 0; attempt < params.max_retries; ++attempt) {
            const int cell = static_cast<int>(rng.uniform_int(0, cells - 1));
            const Point pt = detail::annulus_point(rng, bs_pos[cell], rmin, rmax);
            if (detail::in_region(params, pt)) return {cell, pt};
        }
        throw GenerationError("could not place a node at " + std::to_string(rmin) + "-" +
                              std::to_string(rmax) + " m from any base station inside the region");
    };

    for (int k = 0; k < uplinks; ++k) {
        const auto [cell, pt] = place_near_bs(params.uplink_min, params.uplink_max);
        const int ue = add_node(pt);
        add_link(ue, pt, cell + 1, bs_pos[cell], LinkKind::Uplink);
    }
    for (int k = 0; k < downlinks; ++k) {
        const auto [cell, pt] = place_near_bs(params.downlink_min, params.downlink_max);
        const int ue = add_node(pt);
        add_link(cell + 1, bs_pos[cell], ue, pt, LinkKind::Downlink);
    }
    for (int k = 0; k < d2d_links; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < params.max_retries && !placed; ++attempt) {
            const Point a{rng.uniform_real(0.0, params.region_width),
                          rng.uniform_real(0.0, params.region_height)};
            const Point b = detail::annulus_point(rng, a, params.d2d_min, params.d2d_max);
            if (!detail::in_region(params, b)) continue;
            const int na = add_node(a);
            const int nb = add_node(b);
            add_link(na, a, nb, b, LinkKind::D2d);
            placed = true;
        }
        if (!placed)
            throw GenerationError("could not place a device-to-device pair inside the region");
    }

    // Remaining UE budget (if any) is deployed without links of its own.
    while (static_cast<int>(ue_nodes.size()) < n)
        add_node(Point{rng.uniform_real(0.0, params.region_width),
                       rng.uniform_real(0.0, params.region_height)});

    // Links beyond the UE budget reuse already-placed equipment.
    const auto node_point = [&](int id) {
        const NodePlacement& np = topo.nodes[static_cast<std::size_t>(id) - 1];
        return Point{np.x, np.y};
    };
    for (int k = 0; k < reused_links; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < params.max_retries && !placed; ++attempt) {
            const int ue = ue_nodes[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(ue_nodes.size()) - 1))];
            const Point up = node_point(ue);
            const double pick = rng.uniform_real(0.0, all_frac);
            if (pick < cell_frac) {
                const bool up_link = pick < params.uplink_fraction;
                const double lo = up_link ? params.uplink_min : params.downlink_min;
                const double hi = up_link ? params.uplink_max : params.downlink_max;
                for (int cell = 0; cell < cells; ++cell) {
                    const double d = detail::dist(up, bs_pos[cell]);
                    if (d >= lo && d <= hi) {
                        if (up_link) add_link(ue, up, cell + 1, bs_pos[cell], LinkKind::Uplink);
                        else add_link(cell + 1, bs_pos[cell], ue, up, LinkKind::Downlink);
                        placed = true;
                        break;
                    }
                }
            } else {
                const int other = ue_nodes[static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(ue_nodes.size()) - 1))];
                if (other == ue) continue;
                const Point op = node_point(other);
                const double d = detail::dist(up, op);
                if (d >= params.d2d_min && d <= params.d2d_max) {
                    add_link(ue, up, other, op, LinkKind::D2d);
                    placed = true;
                }
            }
        }
        if (!placed)
            throw GenerationError(
                "could not form link " + std::to_string(topo.links.size() + 1) +
                " by reusing placed equipment; relax the length ranges or link target");
    }

    for (PlacedLink& l : topo.links)
        l.exclusion_ratio = rng.uniform_real(params.exclusion_lo, params.exclusion_hi);

    // Conflicts: the transmitter of one link inside the exclusion disc
    // around the other's receiver, symmetrized by OR.
    std::vector<LinkId> ids;
    std::vector<std::pair<LinkId, LinkId>> edges;
    for (const PlacedLink& l : topo.links) ids.push_back(l.id);
    for (std::size_t a = 0; a < topo.links.size(); ++a) {
        for (std::size_t b = a + 1; b < topo.links.size(); ++b) {
            const double ra = topo.links[a].exclusion_ratio * topo.links[a].length;
            const double rb = topo.links[b].exclusion_ratio * topo.links[b].length;
            if (detail::dist(link_tx[b], link_rx[a]) <= ra ||
                detail::dist(link_tx[a], link_rx[b]) <= rb)
                edges.emplace_back(topo.links[a].id, topo.links[b].id);
        }
    }
    topo.graph = ConflictGraph::from_edges(ids, edges);
    return topo;
}

inline Topology generate_topology(const DeploymentParams& params) {
    Rng rng(params.seed);
    return generate_topology(params, rng);
}

} // namespace ldp

#endif // LDP_TOPOLOGY_HPP
