#ifndef LDP_IO_HPP
#define LDP_IO_HPP

#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ldp/conflict_graph.hpp"
#include "ldp/errors.hpp"
#include "ldp/scheduler.hpp"
#include "ldp/schedulability.hpp"
#include "ldp/topology.hpp"
#include "ldp/traffic.hpp"

namespace ldp {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << '\n';
}

// ---- conflict graph ------------------------------------------------------

inline Json graph_to_json(const ConflictGraph& g) {
    Json j;
    j["links"] = g.link_ids();
    Json conflicts = Json::array();
    for (const LinkId a : g.link_ids())
        for (const LinkId b : g.neighbors(a))
            if (a < b) conflicts.push_back(Json::array({a, b}));
    j["conflicts"] = std::move(conflicts);
    return j;
}

inline ConflictGraph graph_from_json(const Json& j) {
    try {
        std::vector<LinkId> ids = j.at("links").get<std::vector<LinkId>>();
        std::vector<std::pair<LinkId, LinkId>> edges;
        for (const Json& e : j.at("conflicts")) {
            if (!e.is_array() || e.size() != 2)
                throw InputError("conflict entries must be two-element arrays");
            edges.emplace_back(e[0].get<LinkId>(), e[1].get<LinkId>());
        }
        return ConflictGraph::from_edges(ids, edges);
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed conflict graph: ") + e.what());
    }
}

// ---- topology ------------------------------------------------------------

inline Json topology_to_json(const Topology& t) {
    Json j;
    j["region"] = {{"width", t.params.region_width}, {"height", t.params.region_height}};
    j["grid"] = {{"rows", t.params.grid_rows}, {"cols", t.params.grid_cols}};
    j["channels"] = t.params.channels;
    j["seed"] = t.params.seed;
    Json nodes = Json::array();
    for (const NodePlacement& n : t.nodes)
        nodes.push_back({{"id", n.id},
                         {"kind", n.kind == NodeKind::BaseStation ? "bs" : "ue"},
                         {"x", n.x},
                         {"y", n.y}});
    j["nodes"] = std::move(nodes);
    Json links = Json::array();
    for (const PlacedLink& l : t.links) {
        const char* kind = l.kind == LinkKind::Uplink     ? "uplink"
                           : l.kind == LinkKind::Downlink ? "downlink"
                                                          : "d2d";
        links.push_back({{"id", l.id},
                         {"kind", kind},
                         {"tx", l.tx_node},
                         {"rx", l.rx_node},
                         {"length", l.length},
                         {"exclusion_ratio", l.exclusion_ratio}});
    }
    j["links"] = std::move(links);
    j["conflict_graph"] = graph_to_json(t.graph);
    return j;
}

inline Topology topology_from_json(const Json& j) {
    try {
        Topology t;
        t.params.region_width = j.at("region").at("width").get<double>();
        t.params.region_height = j.at("region").at("height").get<double>();
        t.params.grid_rows = j.at("grid").at("rows").get<int>();
        t.params.grid_cols = j.at("grid").at("cols").get<int>();
        t.params.channels = j.value("channels", std::int64_t{1});
        t.params.seed = j.value("seed", std::uint64_t{0});
        int ue_count = 0;
        for (const Json& n : j.at("nodes")) {
            NodePlacement np;
            np.id = n.at("id").get<int>();
            const std::string kind = n.at("kind").get<std::string>();
            if (kind == "bs") np.kind = NodeKind::BaseStation;
            else if (kind == "ue") { np.kind = NodeKind::UserEquipment; ++ue_count; }
            else throw InputError("unknown node kind: " + kind);
            np.x = n.at("x").get<double>();
            np.y = n.at("y").get<double>();
            t.nodes.push_back(np);
        }
        t.params.node_count = ue_count > 0 ? ue_count : 1;
        for (const Json& l : j.at("links")) {
            PlacedLink pl;
            pl.id = l.at("id").get<LinkId>();
            const std::string kind = l.at("kind").get<std::string>();
            if (kind == "uplink") pl.kind = LinkKind::Uplink;
            else if (kind == "downlink") pl.kind = LinkKind::Downlink;
            else if (kind == "d2d") pl.kind = LinkKind::D2d;
            else throw InputError("unknown link kind: " + kind);
            pl.tx_node = l.at("tx").get<int>();
            pl.rx_node = l.at("rx").get<int>();
            pl.length = l.value("length", 0.0);
            pl.exclusion_ratio = l.value("exclusion_ratio", 1.5);
            t.links.push_back(pl);
        }
        t.graph = graph_from_json(j.at("conflict_graph"));
        return t;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed topology: ") + e.what());
    }
}

/// Accepts either a bare conflict-graph object or a full topology file.
inline ConflictGraph load_conflict_graph(const std::string& path) {
    const Json j = load_json_file(path);
    if (j.contains("conflict_graph")) return graph_from_json(j.at("conflict_graph"));
    return graph_from_json(j);
}

// ---- traffic ---------------------------------------------------------------

inline Json traffic_to_json(std::span<const LinkTraffic> traffic) {
    Json arr = Json::array();
    for (const LinkTraffic& t : traffic)
        arr.push_back({{"link", t.link},
                       {"T", t.period},
                       {"D", t.relative_deadline},
                       {"P", t.reliability_req},
                       {"p", t.link_reliability},
                       {"A1", t.first_arrival},
                       {"X", t.work_demand}});
    return arr;
}

inline std::vector<LinkTraffic> traffic_from_json(const Json& j) {
    try {
        std::vector<LinkTraffic> out;
        for (const Json& e : j) {
            std::optional<std::int64_t> x;
            if (e.contains("X")) x = e.at("X").get<std::int64_t>();
            out.push_back(make_link_traffic(e.at("link").get<LinkId>(),
                                            e.at("T").get<SlotIndex>(),
                                            e.at("D").get<SlotIndex>(),
                                            e.at("P").get<double>(),
                                            e.at("p").get<double>(),
                                            e.value("A1", SlotIndex{0}), x));
        }
        return out;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed traffic file: ") + e.what());
    }
}

inline std::vector<LinkTraffic> load_traffic(const std::string& path) {
    return traffic_from_json(load_json_file(path));
}

// ---- verdicts --------------------------------------------------------------

inline Json verdicts_to_json(std::span<const SchedulabilityVerdict> verdicts) {
    Json arr = Json::array();
    for (const SchedulabilityVerdict& v : verdicts) {
        Json cliques = Json::array();
        for (const auto& pc : v.per_clique)
            cliques.push_back({{"clique", pc.clique},
                               {"U", to_string(pc.min_density)},
                               {"members", pc.min_members}});
        arr.push_back({{"link", v.link},
                       {"schedulable", v.schedulable},
                       {"necessary_ok", v.necessary_ok},
                       {"delta", to_string(v.delta)},
                       {"delta_prime", to_string(v.delta_prime)},
                       {"per_clique", std::move(cliques)}});
    }
    return arr;
}

inline std::vector<SchedulabilityVerdict> verdicts_from_json(const Json& j) {
    try {
        std::vector<SchedulabilityVerdict> out;
        for (const Json& e : j) {
            SchedulabilityVerdict v;
            v.link = e.at("link").get<LinkId>();
            v.schedulable = e.at("schedulable").get<bool>();
            v.necessary_ok = e.at("necessary_ok").get<bool>();
            v.delta = parse_rational(e.at("delta").get<std::string>());
            v.delta_prime = parse_rational(e.at("delta_prime").get<std::string>());
            for (const Json& pc : e.value("per_clique", Json::array())) {
                SchedulabilityVerdict::PerClique c;
                c.clique = pc.at("clique").get<std::vector<LinkId>>();
                c.min_density = parse_rational(pc.at("U").get<std::string>());
                c.min_members = pc.at("members").get<std::vector<LinkId>>();
                v.per_clique.push_back(std::move(c));
            }
            out.push_back(std::move(v));
        }
        return out;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed verdicts file: ") + e.what());
    }
}

// ---- simulation reports ------------------------------------------------------

struct StoredReport {
    SimulationReport report;
    std::string mode;
    std::string scheduler;
    std::int64_t channels = 0;
    SlotIndex horizon = 0;
    std::uint64_t seed = 0;
};

inline Json report_to_json(const SimulationReport& r, const std::string& mode,
                           const std::string& scheduler, std::int64_t channels,
                           SlotIndex horizon, std::uint64_t seed) {
    Json links = Json::array();
    for (const auto& l : r.links) {
        Json e = {{"link", l.link},
                  {"packets", l.packets},
                  {"misses", l.misses},
                  {"delivered_in_time", l.delivered_in_time},
                  {"schedulable", l.schedulable}};
        if (l.empirical_success) e["empirical_success"] = *l.empirical_success;
        links.push_back(std::move(e));
    }
    return Json{{"mode", mode},
                {"scheduler", scheduler},
                {"channels", channels},
                {"horizon", horizon},
                {"seed", seed},
                {"aggregate",
                 {{"slots", r.slots},
                  {"max_rounds", r.max_rounds},
                  {"mean_rounds", r.mean_rounds},
                  {"schedulable_ratio", r.schedulable_ratio},
                  {"total_packets", r.total_packets},
                  {"total_misses", r.total_misses}}},
                {"links", std::move(links)}};
}

inline StoredReport report_from_json(const Json& j) {
    try {
        StoredReport s;
        s.mode = j.at("mode").get<std::string>();
        s.scheduler = j.at("scheduler").get<std::string>();
        s.channels = j.at("channels").get<std::int64_t>();
        s.horizon = j.at("horizon").get<SlotIndex>();
        s.seed = j.at("seed").get<std::uint64_t>();
        const Json& agg = j.at("aggregate");
        s.report.slots = agg.at("slots").get<SlotIndex>();
        s.report.max_rounds = agg.at("max_rounds").get<int>();
        s.report.mean_rounds = agg.at("mean_rounds").get<double>();
        s.report.schedulable_ratio = agg.at("schedulable_ratio").get<double>();
        s.report.total_packets = agg.at("total_packets").get<std::int64_t>();
        s.report.total_misses = agg.at("total_misses").get<std::int64_t>();
        for (const Json& e : j.at("links")) {
            SimulationReport::PerLink l;
            l.link = e.at("link").get<LinkId>();
            l.packets = e.at("packets").get<std::int64_t>();
            l.misses = e.at("misses").get<std::int64_t>();
            l.delivered_in_time = e.at("delivered_in_time").get<std::int64_t>();
            l.schedulable = e.at("schedulable").get<bool>();
            if (e.contains("empirical_success"))
                l.empirical_success = e.at("empirical_success").get<double>();
            s.report.links.push_back(std::move(l));
        }
        return s;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed report file: ") + e.what());
    }
}

} // namespace ldp

#endif // LDP_IO_HPP
