#ifndef LDP_EXPERIMENT_HPP
#define LDP_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ldp/errors.hpp"
#include "ldp/io.hpp"
#include "ldp/scheduler.hpp"
#include "ldp/schedulability.hpp"
#include "ldp/topology.hpp"
#include "ldp/traffic_gen.hpp"

namespace ldp {

struct ExperimentConfig {
    DeploymentParams deployment;
    TrafficGenParams traffic;
    std::vector<std::int64_t> channels = {4};
    SlotIndex horizon = 20000;
    SimMode mode = SimMode::Deterministic;
    std::vector<SchedulerKind> schedulers = {SchedulerKind::Ldp, SchedulerKind::EdfBaseline};
    std::vector<std::uint64_t> seeds = {1};
    std::string out_dir = "out";
    int histogram_bins = 20;
    double histogram_lo = 0.0;
    double histogram_hi = 1.0;
    double deadline_bin_width = 10.0;

    void validate() const {
        deployment.validate();
        traffic.validate();
        if (channels.empty()) throw InputError("channel sweep must not be empty");
        for (const auto n : channels)
            if (n < 1) throw InputError("channel sweep values must be >= 1");
        if (horizon < 1) throw InputError("horizon must be >= 1");
        if (seeds.empty()) throw InputError("seed list must not be empty");
        if (schedulers.empty()) throw InputError("scheduler list must not be empty");
        if (histogram_bins < 1) throw InputError("histogram bin count must be >= 1");
        if (!(histogram_lo < histogram_hi)) throw InputError("histogram range must be non-empty");
        if (deadline_bin_width <= 0) throw InputError("deadline bin width must be positive");
    }
};

inline const char* scheduler_name(SchedulerKind k) {
    return k == SchedulerKind::Ldp ? "ldp" : "edf";
}

inline SchedulerKind scheduler_from_name(const std::string& name) {
    if (name == "ldp") return SchedulerKind::Ldp;
    if (name == "edf" || name == "edf-baseline") return SchedulerKind::EdfBaseline;
    throw InputError("unknown scheduler: " + name);
}

inline const char* mode_name(SimMode m) {
    return m == SimMode::Deterministic ? "det" : "bern";
}

inline SimMode mode_from_name(const std::string& name) {
    if (name == "det" || name == "deterministic") return SimMode::Deterministic;
    if (name == "bern" || name == "bernoulli") return SimMode::Bernoulli;
    throw InputError("unknown simulation mode: " + name);
}

// ---- ratio statistics -------------------------------------------------------

struct Histogram {
    std::vector<double> edges; // bins+1 edges; last bin closed on the right
    std::vector<std::int64_t> counts;
    std::int64_t n = 0;
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

enum class RatioKind { Delta, DeltaPrime };

/// Histogram, mean and normal-approximation 95% confidence interval of
/// the per-link approximation ratios.
inline Histogram ratio_histogram(std::span<const SchedulabilityVerdict> verdicts,
                                 RatioKind kind = RatioKind::Delta, int bins = 20,
                                 double lo = 0.0, double hi = 1.0) {
    if (verdicts.empty()) throw InputError("ratio histogram needs at least one verdict");
    if (bins < 1 || !(lo < hi)) throw InputError("bad histogram binning");
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        h.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);

    double sum = 0.0, sumsq = 0.0;
    for (const SchedulabilityVerdict& v : verdicts) {
        const double x = to_double(kind == RatioKind::Delta ? v.delta : v.delta_prime);
        sum += x;
        sumsq += x * x;
        int b = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
        b = std::clamp(b, 0, bins - 1);
        h.counts[static_cast<std::size_t>(b)] += 1;
        h.n += 1;
    }
    h.mean = sum / static_cast<double>(h.n);
    if (h.n > 1) {
        const double var =
            std::max(0.0, (sumsq - sum * sum / static_cast<double>(h.n)) /
                              static_cast<double>(h.n - 1));
        const double half = 1.96 * std::sqrt(var / static_cast<double>(h.n));
        h.ci_lo = h.mean - half;
        h.ci_hi = h.mean + half;
    } else {
        h.ci_lo = h.ci_hi = h.mean;
    }
    return h;
}

/// Per-deadline-bin infeasible ratio; bins are [e_j, e_{j+1}) over the
/// given edges. Bins holding no links report no ratio at all.
inline std::vector<std::optional<double>> deadline_bin_report(
    std::span<const SchedulabilityVerdict> verdicts, std::span<const LinkTraffic> traffic,
    std::span<const double> edges) {
    if (edges.size() < 2) throw InputError("deadline bins need at least two edges");
    TrafficMap map = make_traffic_map(traffic);
    const std::size_t bins = edges.size() - 1;
    std::vector<std::int64_t> total(bins, 0), bad(bins, 0);
    for (const SchedulabilityVerdict& v : verdicts) {
        const auto it = map.find(v.link);
        if (it == map.end())
            throw InputError("no traffic entry for link " + std::to_string(v.link));
        const double d = static_cast<double>(it->second.relative_deadline);
        if (d < edges.front() || d >= edges.back())
            throw InputError("deadline bins do not cover link " + std::to_string(v.link));
        std::size_t b = 0;
        while (b + 1 < bins && d >= edges[b + 1]) ++b;
        total[b] += 1;
        if (!v.schedulable) bad[b] += 1;
    }
    std::vector<std::optional<double>> out(bins);
    for (std::size_t b = 0; b < bins; ++b)
        if (total[b] > 0)
            out[b] = static_cast<double>(bad[b]) / static_cast<double>(total[b]);
    return out;
}

// ---- aggregated metrics -----------------------------------------------------

struct MetricsRow {
    std::uint64_t seed = 0;
    std::int64_t channels = 0;
    std::string scheduler;
    double test_schedulable_ratio = 0.0;
    double sim_schedulable_ratio = 0.0;
    double mean_delta = 0.0;
    double delta_ci_lo = 0.0;
    double delta_ci_hi = 0.0;
    double mean_delta_prime = 0.0;
    std::int64_t total_packets = 0;
    std::int64_t total_misses = 0;
    int max_rounds = 0;
    double mean_rounds = 0.0;
    std::int64_t flagged_unschedulable = 0; // generator bottomed out on these
    std::vector<std::optional<double>> bin_infeasible; // per deadline bin, from the simulation
    std::string error; // empty when the cell ran cleanly
};

struct MetricsTable {
    std::vector<double> deadline_bin_edges;
    std::vector<MetricsRow> rows;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<double> make_deadline_edges(const TrafficGenParams& p, double width) {
    std::vector<double> edges;
    double e = static_cast<double>(p.deadline_min);
    edges.push_back(e);
    while (e <= static_cast<double>(p.deadline_max)) {
        e += width;
        edges.push_back(e);
    }
    return edges;
}

/// Infeasibility bins from a simulation report (a link is infeasible for
/// the row when the run declared it unschedulable).
inline std::vector<std::optional<double>> sim_bin_report(const SimulationReport& rep,
                                                         std::span<const LinkTraffic> traffic,
                                                         std::span<const double> edges) {
    std::vector<SchedulabilityVerdict> pseudo;
    pseudo.reserve(rep.links.size());
    for (const auto& l : rep.links) {
        SchedulabilityVerdict v;
        v.link = l.link;
        v.schedulable = l.schedulable;
        pseudo.push_back(std::move(v));
    }
    return deadline_bin_report(pseudo, traffic, edges);
}

} // namespace detail

inline int worker_count(std::size_t cells) {
    if (const char* env = std::getenv("LDP_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return static_cast<int>(std::min<std::size_t>(cells, v));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min<std::size_t>(cells, hw > 0 ? hw : 1));
}

/// Full pipeline per (seed, channel-count) cell: topology, traffic with
/// the demand-reduction loop, schedulability verdicts, one simulation per
/// scheduler, persisted artifacts, and one aggregated row per scheduler.
/// Cells run on a small worker pool; aggregation order and file contents
/// are independent of the worker count. Cell failures land in the rows'
/// error column and do not stop the pipeline.
inline MetricsTable run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    config.validate();
    fs::create_directories(config.out_dir);

    MetricsTable table;
    table.deadline_bin_edges =
        detail::make_deadline_edges(config.traffic, config.deadline_bin_width);

    struct Cell {
        std::uint64_t seed;
        std::int64_t channels;
        std::vector<MetricsRow> rows;
    };
    std::vector<Cell> cells;
    for (const std::uint64_t seed : config.seeds)
        for (const std::int64_t n : config.channels)
            cells.push_back(Cell{seed, n, {}});

    // One topology per seed, shared across the channel sweep.
    std::vector<Topology> topologies;
    for (const std::uint64_t seed : config.seeds) {
        DeploymentParams dp = config.deployment;
        dp.seed = seed;
        topologies.push_back(generate_topology(dp));
        const fs::path dir = fs::path(config.out_dir) / ("seed_" + std::to_string(seed));
        fs::create_directories(dir);
        save_json_file((dir / "topology.json").string(), topology_to_json(topologies.back()));
    }

    const auto run_cell = [&](Cell& cell) {
        const std::size_t seed_pos = static_cast<std::size_t>(
            std::find(config.seeds.begin(), config.seeds.end(), cell.seed) -
            config.seeds.begin());
        const Topology& topo = topologies[seed_pos];
        const fs::path dir = fs::path(config.out_dir) / ("seed_" + std::to_string(cell.seed));
        const std::string suffix = "_c" + std::to_string(cell.channels) + ".json";
        try {
            Rng rng(derive_seed(cell.seed, static_cast<std::uint64_t>(cell.channels)));
            FeasibilityContext ctx(topo.graph);
            TrafficGenResult gen = generate_traffic(topo.graph, cell.channels, rng,
                                                    default_sched_test(topo.graph,
                                                                       cell.channels, ctx),
                                                    config.traffic);
            save_json_file((dir / ("traffic" + suffix)).string(), traffic_to_json(gen.traffic));

            const TrafficMap traffic_map = make_traffic_map(gen.traffic);
            std::vector<SchedulabilityVerdict> verdicts;
            std::size_t test_ok = 0;
            for (const LinkId id : topo.graph.link_ids()) {
                verdicts.push_back(
                    schedulability_test(topo.graph, id, traffic_map, cell.channels, &ctx));
                if (verdicts.back().schedulable) ++test_ok;
            }
            save_json_file((dir / ("verdicts" + suffix)).string(), verdicts_to_json(verdicts));

            const Histogram hd = ratio_histogram(verdicts, RatioKind::Delta,
                                                 config.histogram_bins, config.histogram_lo,
                                                 config.histogram_hi);
            const Histogram hp = ratio_histogram(verdicts, RatioKind::DeltaPrime,
                                                 config.histogram_bins, config.histogram_lo,
                                                 config.histogram_hi);

            for (const SchedulerKind sched : config.schedulers) {
                MetricsRow row;
                row.seed = cell.seed;
                row.channels = cell.channels;
                row.scheduler = scheduler_name(sched);
                row.test_schedulable_ratio =
                    static_cast<double>(test_ok) / static_cast<double>(verdicts.size());
                row.mean_delta = hd.mean;
                row.delta_ci_lo = hd.ci_lo;
                row.delta_ci_hi = hd.ci_hi;
                row.mean_delta_prime = hp.mean;
                row.flagged_unschedulable =
                    static_cast<std::int64_t>(gen.unschedulable.size());

                SimulationOptions opt;
                opt.mode = config.mode;
                opt.scheduler = sched;
                opt.seed = derive_seed(cell.seed,
                                       0x1000 + static_cast<std::uint64_t>(cell.channels));
                const SimulationReport rep = run_simulation(topo.graph, gen.traffic,
                                                            cell.channels, config.horizon, opt);
                save_json_file(
                    (dir / (std::string("report_") + scheduler_name(sched) + suffix)).string(),
                    report_to_json(rep, mode_name(config.mode), scheduler_name(sched),
                                   cell.channels, config.horizon, opt.seed));
                row.sim_schedulable_ratio = rep.schedulable_ratio;
                row.total_packets = rep.total_packets;
                row.total_misses = rep.total_misses;
                row.max_rounds = rep.max_rounds;
                row.mean_rounds = rep.mean_rounds;
                row.bin_infeasible =
                    detail::sim_bin_report(rep, gen.traffic, table.deadline_bin_edges);
                cell.rows.push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            cell.rows.clear();
            for (const SchedulerKind sched : config.schedulers) {
                MetricsRow row;
                row.seed = cell.seed;
                row.channels = cell.channels;
                row.scheduler = scheduler_name(sched);
                row.error = e.what();
                cell.rows.push_back(std::move(row));
            }
        }
    };

    const int workers = worker_count(cells.size());
    if (workers <= 1) {
        for (Cell& cell : cells) run_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t k = next.fetch_add(1);
                    if (k >= cells.size()) return;
                    run_cell(cells[k]);
                }
            });
        for (auto& th : pool) th.join();
    }

    for (Cell& cell : cells)
        for (MetricsRow& row : cell.rows) table.rows.push_back(std::move(row));
    return table;
}

inline Json metrics_to_json(const MetricsTable& table) {
    Json rows = Json::array();
    for (const MetricsRow& r : table.rows) {
        Json bins = Json::array();
        for (const auto& b : r.bin_infeasible) {
            if (b) bins.push_back(*b);
            else bins.push_back(nullptr);
        }
        rows.push_back({{"seed", r.seed},
                        {"channels", r.channels},
                        {"scheduler", r.scheduler},
                        {"test_schedulable_ratio", r.test_schedulable_ratio},
                        {"sim_schedulable_ratio", r.sim_schedulable_ratio},
                        {"mean_delta", r.mean_delta},
                        {"delta_ci_lo", r.delta_ci_lo},
                        {"delta_ci_hi", r.delta_ci_hi},
                        {"mean_delta_prime", r.mean_delta_prime},
                        {"total_packets", r.total_packets},
                        {"total_misses", r.total_misses},
                        {"max_rounds", r.max_rounds},
                        {"mean_rounds", r.mean_rounds},
                        {"flagged_unschedulable", r.flagged_unschedulable},
                        {"bin_infeasible", std::move(bins)},
                        {"error", r.error}});
    }
    return Json{{"deadline_bin_edges", table.deadline_bin_edges}, {"rows", std::move(rows)}};
}

inline MetricsTable metrics_from_json(const Json& j) {
    try {
        MetricsTable t;
        t.deadline_bin_edges = j.at("deadline_bin_edges").get<std::vector<double>>();
        for (const Json& e : j.at("rows")) {
            MetricsRow r;
            r.seed = e.at("seed").get<std::uint64_t>();
            r.channels = e.at("channels").get<std::int64_t>();
            r.scheduler = e.at("scheduler").get<std::string>();
            r.test_schedulable_ratio = e.at("test_schedulable_ratio").get<double>();
            r.sim_schedulable_ratio = e.at("sim_schedulable_ratio").get<double>();
            r.mean_delta = e.at("mean_delta").get<double>();
            r.delta_ci_lo = e.at("delta_ci_lo").get<double>();
            r.delta_ci_hi = e.at("delta_ci_hi").get<double>();
            r.mean_delta_prime = e.at("mean_delta_prime").get<double>();
            r.total_packets = e.at("total_packets").get<std::int64_t>();
            r.total_misses = e.at("total_misses").get<std::int64_t>();
            r.max_rounds = e.at("max_rounds").get<int>();
            r.mean_rounds = e.at("mean_rounds").get<double>();
            r.flagged_unschedulable = e.at("flagged_unschedulable").get<std::int64_t>();
            for (const Json& b : e.at("bin_infeasible")) {
                if (b.is_null()) r.bin_infeasible.push_back(std::nullopt);
                else r.bin_infeasible.push_back(b.get<double>());
            }
            r.error = e.value("error", std::string{});
            t.rows.push_back(std::move(r));
        }
        return t;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed metrics file: ") + e.what());
    }
}

inline void write_metrics_csv(const MetricsTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "seed,channels,scheduler,test_schedulable_ratio,sim_schedulable_ratio,"
           "mean_delta,delta_ci_lo,delta_ci_hi,mean_delta_prime,total_packets,"
           "total_misses,max_rounds,mean_rounds,flagged_unschedulable,error\n";
    for (const MetricsRow& r : table.rows) {
        out << r.seed << ',' << r.channels << ',' << r.scheduler << ','
            << detail::fmt_double(r.test_schedulable_ratio) << ','
            << detail::fmt_double(r.sim_schedulable_ratio) << ','
            << detail::fmt_double(r.mean_delta) << ',' << detail::fmt_double(r.delta_ci_lo)
            << ',' << detail::fmt_double(r.delta_ci_hi) << ','
            << detail::fmt_double(r.mean_delta_prime) << ',' << r.total_packets << ','
            << r.total_misses << ',' << r.max_rounds << ','
            << detail::fmt_double(r.mean_rounds) << ',' << r.flagged_unschedulable << ','
            << r.error << '\n';
    }
}

inline void write_bins_csv(const MetricsTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "seed,channels,scheduler,bin_lo,bin_hi,infeasible_ratio\n";
    for (const MetricsRow& r : table.rows) {
        for (std::size_t b = 0; b + 1 < table.deadline_bin_edges.size() &&
                                b < r.bin_infeasible.size();
             ++b) {
            out << r.seed << ',' << r.channels << ',' << r.scheduler << ','
                << detail::fmt_double(table.deadline_bin_edges[b]) << ','
                << detail::fmt_double(table.deadline_bin_edges[b + 1]) << ',';
            if (r.bin_infeasible[b]) out << detail::fmt_double(*r.bin_infeasible[b]);
            out << '\n';
        }
    }
}

/// Rebuilds the aggregated table from the artifacts persisted by
/// run_experiment, using metrics.json as the manifest of cells.
inline MetricsTable recompute_metrics(const std::string& out_dir) {
    namespace fs = std::filesystem;
    const MetricsTable manifest =
        metrics_from_json(load_json_file((fs::path(out_dir) / "metrics.json").string()));
    MetricsTable table;
    table.deadline_bin_edges = manifest.deadline_bin_edges;
    for (const MetricsRow& src : manifest.rows) {
        MetricsRow row = src;
        if (!src.error.empty()) {
            table.rows.push_back(std::move(row));
            continue;
        }
        const fs::path dir = fs::path(out_dir) / ("seed_" + std::to_string(src.seed));
        const std::string suffix = "_c" + std::to_string(src.channels) + ".json";
        const auto traffic = load_traffic((dir / ("traffic" + suffix)).string());
        const auto verdicts =
            verdicts_from_json(load_json_file((dir / ("verdicts" + suffix)).string()));
        const StoredReport stored = report_from_json(load_json_file(
            (dir / ("report_" + src.scheduler + suffix)).string()));

        std::size_t ok = 0;
        for (const auto& v : verdicts)
            if (v.schedulable) ++ok;
        row.test_schedulable_ratio = static_cast<double>(ok) /
                                     static_cast<double>(verdicts.size());
        const Histogram hd = ratio_histogram(verdicts, RatioKind::Delta);
        const Histogram hp = ratio_histogram(verdicts, RatioKind::DeltaPrime);
        row.mean_delta = hd.mean;
        row.delta_ci_lo = hd.ci_lo;
        row.delta_ci_hi = hd.ci_hi;
        row.mean_delta_prime = hp.mean;

        std::size_t sim_ok = 0;
        std::int64_t packets = 0, misses = 0;
        for (const auto& l : stored.report.links) {
            if (l.schedulable) ++sim_ok;
            packets += l.packets;
            misses += l.misses;
        }
        row.sim_schedulable_ratio = static_cast<double>(sim_ok) /
                                    static_cast<double>(stored.report.links.size());
        row.total_packets = packets;
        row.total_misses = misses;
        row.bin_infeasible =
            detail::sim_bin_report(stored.report, traffic, table.deadline_bin_edges);
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---- experiment config (JSON) ----------------------------------------------

inline Json config_to_json(const ExperimentConfig& c) {
    Json dep{{"region_width", c.deployment.region_width},
             {"region_height", c.deployment.region_height},
             {"grid_rows", c.deployment.grid_rows},
             {"grid_cols", c.deployment.grid_cols},
             {"node_count", c.deployment.node_count},
             {"uplink_min", c.deployment.uplink_min},
             {"uplink_max", c.deployment.uplink_max},
             {"downlink_min", c.deployment.downlink_min},
             {"downlink_max", c.deployment.downlink_max},
             {"d2d_min", c.deployment.d2d_min},
             {"d2d_max", c.deployment.d2d_max},
             {"exclusion_lo", c.deployment.exclusion_lo},
             {"exclusion_hi", c.deployment.exclusion_hi},
             {"uplink_fraction", c.deployment.uplink_fraction},
             {"downlink_fraction", c.deployment.downlink_fraction},
             {"d2d_fraction", c.deployment.d2d_fraction}};
    if (c.deployment.target_link_count) dep["target_link_count"] = *c.deployment.target_link_count;
    Json tr{{"deadline_min", c.traffic.deadline_min},
            {"deadline_max", c.traffic.deadline_max},
            {"slack_divisor", c.traffic.slack_divisor},
            {"link_reliability", c.traffic.link_reliability},
            {"randomize_first_arrival", c.traffic.randomize_first_arrival}};
    std::vector<std::string> scheds;
    for (const auto s : c.schedulers) scheds.emplace_back(scheduler_name(s));
    return Json{{"deployment", std::move(dep)},
                {"traffic", std::move(tr)},
                {"channels", c.channels},
                {"horizon", c.horizon},
                {"mode", mode_name(c.mode)},
                {"schedulers", scheds},
                {"seeds", c.seeds},
                {"out_dir", c.out_dir},
                {"histogram_bins", c.histogram_bins},
                {"deadline_bin_width", c.deadline_bin_width}};
}

inline ExperimentConfig config_from_json(const Json& j) {
    try {
        ExperimentConfig c;
        if (j.contains("preset")) {
            const std::string preset = j.at("preset").get<std::string>();
            if (preset == "network1") c.deployment = network1_params();
            else if (preset == "network2") c.deployment = network2_params();
            else throw InputError("unknown deployment preset: " + preset);
        }
        if (j.contains("deployment")) {
            const Json& d = j.at("deployment");
            DeploymentParams& p = c.deployment;
            p.region_width = d.value("region_width", p.region_width);
            p.region_height = d.value("region_height", p.region_height);
            p.grid_rows = d.value("grid_rows", p.grid_rows);
            p.grid_cols = d.value("grid_cols", p.grid_cols);
            p.node_count = d.value("node_count", p.node_count);
            p.uplink_min = d.value("uplink_min", p.uplink_min);
            p.uplink_max = d.value("uplink_max", p.uplink_max);
            p.downlink_min = d.value("downlink_min", p.downlink_min);
            p.downlink_max = d.value("downlink_max", p.downlink_max);
            p.d2d_min = d.value("d2d_min", p.d2d_min);
            p.d2d_max = d.value("d2d_max", p.d2d_max);
            p.exclusion_lo = d.value("exclusion_lo", p.exclusion_lo);
            p.exclusion_hi = d.value("exclusion_hi", p.exclusion_hi);
            p.uplink_fraction = d.value("uplink_fraction", p.uplink_fraction);
            p.downlink_fraction = d.value("downlink_fraction", p.downlink_fraction);
            p.d2d_fraction = d.value("d2d_fraction", p.d2d_fraction);
            if (d.contains("target_link_count") && !d.at("target_link_count").is_null())
                p.target_link_count = d.at("target_link_count").get<int>();
        }
        if (j.contains("traffic")) {
            const Json& d = j.at("traffic");
            TrafficGenParams& p = c.traffic;
            p.deadline_min = d.value("deadline_min", p.deadline_min);
            p.deadline_max = d.value("deadline_max", p.deadline_max);
            p.slack_divisor = d.value("slack_divisor", p.slack_divisor);
            p.link_reliability = d.value("link_reliability", p.link_reliability);
            p.randomize_first_arrival =
                d.value("randomize_first_arrival", p.randomize_first_arrival);
        }
        c.channels = j.value("channels", c.channels);
        c.horizon = j.value("horizon", c.horizon);
        if (j.contains("mode")) c.mode = mode_from_name(j.at("mode").get<std::string>());
        if (j.contains("schedulers")) {
            c.schedulers.clear();
            for (const Json& s : j.at("schedulers"))
                c.schedulers.push_back(scheduler_from_name(s.get<std::string>()));
        }
        c.seeds = j.value("seeds", c.seeds);
        c.out_dir = j.value("out_dir", c.out_dir);
        c.histogram_bins = j.value("histogram_bins", c.histogram_bins);
        c.deadline_bin_width = j.value("deadline_bin_width", c.deadline_bin_width);
        return c;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed experiment config: ") + e.what());
    }
}

} // namespace ldp

#endif // LDP_EXPERIMENT_HPP
