// ldpsched: multi-cell multi-channel real-time wireless scheduling toolkit.
//
// Subcommands: gen-topology, gen-traffic, test, ratios, simulate,
// experiment, report. Exit codes: 0 success, 1 input error, 2 capacity
// error, 3 internal invariant violation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ldp/experiment.hpp"
#include "ldp/io.hpp"
#include "ldp/scheduler.hpp"
#include "ldp/schedulability.hpp"
#include "ldp/topology.hpp"
#include "ldp/traffic_gen.hpp"

namespace {

using namespace ldp;

void add_deployment_flags(CLI::App* cmd, DeploymentParams& p, std::string& preset) {
    cmd->add_option("--preset", preset, "deployment preset: network1 or network2");
    cmd->add_option("--nodes", p.node_count, "number of user-equipment nodes");
    cmd->add_option("--region-width", p.region_width, "region width in meters");
    cmd->add_option("--region-height", p.region_height, "region height in meters");
    cmd->add_option("--grid-rows", p.grid_rows, "cell grid rows");
    cmd->add_option("--grid-cols", p.grid_cols, "cell grid columns");
    cmd->add_option("--links", p.target_link_count, "target link count");
    cmd->add_option("--exclusion-lo", p.exclusion_lo, "exclusion ratio lower bound");
    cmd->add_option("--exclusion-hi", p.exclusion_hi, "exclusion ratio upper bound");
    cmd->add_option("--d2d-fraction", p.d2d_fraction, "device-to-device link share");
}

DeploymentParams resolve_deployment(const DeploymentParams& flags, const std::string& preset,
                                    const CLI::App* cmd) {
    DeploymentParams p = flags;
    if (!preset.empty()) {
        DeploymentParams base;
        if (preset == "network1") base = network1_params();
        else if (preset == "network2") base = network2_params();
        else throw InputError("unknown preset: " + preset);
        // flags given explicitly override the preset
        DeploymentParams merged = base;
        if (cmd->count("--nodes")) merged.node_count = p.node_count;
        if (cmd->count("--region-width")) merged.region_width = p.region_width;
        if (cmd->count("--region-height")) merged.region_height = p.region_height;
        if (cmd->count("--grid-rows")) merged.grid_rows = p.grid_rows;
        if (cmd->count("--grid-cols")) merged.grid_cols = p.grid_cols;
        if (cmd->count("--links")) merged.target_link_count = p.target_link_count;
        if (cmd->count("--exclusion-lo")) merged.exclusion_lo = p.exclusion_lo;
        if (cmd->count("--exclusion-hi")) merged.exclusion_hi = p.exclusion_hi;
        if (cmd->count("--d2d-fraction")) merged.d2d_fraction = p.d2d_fraction;
        p = merged;
    }
    return p;
}

std::vector<SchedulabilityVerdict> test_all_links(const ConflictGraph& g,
                                                  const std::vector<LinkTraffic>& traffic,
                                                  std::int64_t channels) {
    const TrafficMap map = make_traffic_map(traffic);
    FeasibilityContext ctx(g);
    std::vector<SchedulabilityVerdict> verdicts;
    verdicts.reserve(g.node_count());
    for (const LinkId id : g.link_ids())
        verdicts.push_back(schedulability_test(g, id, map, channels, &ctx));
    return verdicts;
}

int run(int argc, char** argv) {
    CLI::App app{"LDP real-time wireless scheduling toolkit"};
    app.require_subcommand(1);

    // gen-topology
    auto* gen_topo = app.add_subcommand("gen-topology", "generate a random deployment");
    DeploymentParams topo_params;
    std::string topo_preset;
    std::uint64_t topo_seed = 1;
    std::string topo_out = "topology.json";
    std::int64_t topo_channels = 4;
    add_deployment_flags(gen_topo, topo_params, topo_preset);
    gen_topo->add_option("--seed", topo_seed, "rng seed");
    gen_topo->add_option("--channels", topo_channels, "channel count recorded in the file");
    gen_topo->add_option("--out", topo_out, "output topology file");

    // gen-traffic
    auto* gen_tr = app.add_subcommand("gen-traffic", "generate schedulable traffic");
    std::string tr_topology;
    std::int64_t tr_channels = 4;
    std::uint64_t tr_seed = 1;
    std::string tr_out = "traffic.json";
    TrafficGenParams tr_params;
    gen_tr->add_option("--topology", tr_topology, "topology or conflict-graph file")
        ->required();
    gen_tr->add_option("--channels", tr_channels, "channel count for the schedulability test");
    gen_tr->add_option("--seed", tr_seed, "rng seed");
    gen_tr->add_option("--deadline-min", tr_params.deadline_min, "minimum relative deadline");
    gen_tr->add_option("--deadline-max", tr_params.deadline_max, "maximum relative deadline");
    gen_tr->add_option("--reliability", tr_params.link_reliability, "per-try link reliability");
    gen_tr->add_flag("--random-phase", tr_params.randomize_first_arrival,
                     "draw per-link first arrivals");
    gen_tr->add_option("--out", tr_out, "output traffic file");

    // test
    auto* test_cmd = app.add_subcommand("test", "per-link schedulability test");
    std::string test_topology, test_traffic, test_out = "verdicts.json";
    std::int64_t test_channels = 4;
    test_cmd->add_option("--topology", test_topology, "topology or conflict-graph file")
        ->required();
    test_cmd->add_option("--traffic", test_traffic, "traffic file")->required();
    test_cmd->add_option("--channels", test_channels, "channel count");
    test_cmd->add_option("--out", test_out, "output verdicts file");

    // ratios
    auto* ratios_cmd = app.add_subcommand("ratios", "approximation-ratio histograms");
    std::string rat_topology, rat_traffic, rat_out = "ratios.csv";
    int rat_bins = 20;
    double rat_lo = 0.0, rat_hi = 1.0;
    ratios_cmd->add_option("--topology", rat_topology, "topology or conflict-graph file")
        ->required();
    ratios_cmd->add_option("--traffic", rat_traffic, "traffic file")->required();
    ratios_cmd->add_option("--bins", rat_bins, "histogram bin count");
    ratios_cmd->add_option("--lo", rat_lo, "histogram lower edge");
    ratios_cmd->add_option("--hi", rat_hi, "histogram upper edge");
    ratios_cmd->add_option("--out", rat_out, "output CSV file");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "time-stepped scheduling simulation");
    std::string sim_topology, sim_traffic, sim_out = "report.json", sim_slot_csv;
    std::string sim_mode = "det", sim_sched = "ldp";
    std::int64_t sim_channels = 4;
    SlotIndex sim_horizon = 20000;
    std::uint64_t sim_seed = 1;
    sim_cmd->add_option("--topology", sim_topology, "topology or conflict-graph file")
        ->required();
    sim_cmd->add_option("--traffic", sim_traffic, "traffic file")->required();
    sim_cmd->add_option("--channels", sim_channels, "channel count");
    sim_cmd->add_option("--horizon", sim_horizon, "slots to simulate");
    sim_cmd->add_option("--mode", sim_mode, "det or bern");
    sim_cmd->add_option("--scheduler", sim_sched, "ldp or edf");
    sim_cmd->add_option("--seed", sim_seed, "rng seed (bernoulli mode)");
    sim_cmd->add_option("--out", sim_out, "output report file");
    sim_cmd->add_option("--slot-csv", sim_slot_csv, "per-slot active-count CSV");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "full pipeline over seeds and channels");
    std::string exp_config, exp_out_dir;
    std::vector<std::uint64_t> exp_seeds;
    std::vector<std::int64_t> exp_channels;
    std::optional<SlotIndex> exp_horizon;
    exp_cmd->add_option("--config", exp_config, "experiment config JSON");
    exp_cmd->add_option("--seeds", exp_seeds, "override seed list");
    exp_cmd->add_option("--channels", exp_channels, "override channel sweep");
    exp_cmd->add_option("--horizon", exp_horizon, "override horizon");
    exp_cmd->add_option("--out-dir", exp_out_dir, "override output directory");

    // report
    auto* rep_cmd = app.add_subcommand("report", "re-aggregate persisted experiment artifacts");
    std::string rep_dir, rep_out = "metrics_recomputed.csv";
    rep_cmd->add_option("--in-dir", rep_dir, "experiment output directory")->required();
    rep_cmd->add_option("--out", rep_out, "output CSV file");

    CLI11_PARSE(app, argc, argv);

    if (gen_topo->parsed()) {
        DeploymentParams p = resolve_deployment(topo_params, topo_preset, gen_topo);
        p.seed = topo_seed;
        if (gen_topo->count("--channels")) p.channels = topo_channels;
        const Topology topo = generate_topology(p);
        save_json_file(topo_out, topology_to_json(topo));
        std::cout << "wrote " << topo_out << ": " << topo.nodes.size() << " nodes, "
                  << topo.links.size() << " links, "
                  << topo.graph.node_count() << " conflict-graph nodes\n";
        return 0;
    }

    if (gen_tr->parsed()) {
        const ConflictGraph g = load_conflict_graph(tr_topology);
        Rng rng(tr_seed);
        const TrafficGenResult gen = generate_traffic(g, tr_channels, rng, nullptr, tr_params);
        save_json_file(tr_out, traffic_to_json(gen.traffic));
        std::cout << "wrote " << tr_out << ": " << gen.traffic.size() << " links";
        if (!gen.unschedulable.empty()) {
            std::cout << "; unschedulable even at minimum demand:";
            for (const LinkId id : gen.unschedulable) std::cout << ' ' << id;
        }
        std::cout << '\n';
        return 0;
    }

    if (test_cmd->parsed()) {
        const ConflictGraph g = load_conflict_graph(test_topology);
        const auto traffic = load_traffic(test_traffic);
        const auto verdicts = test_all_links(g, traffic, test_channels);
        save_json_file(test_out, verdicts_to_json(verdicts));
        std::size_t ok = 0;
        for (const auto& v : verdicts)
            if (v.schedulable) ++ok;
        std::cout << "wrote " << test_out << ": " << ok << "/" << verdicts.size()
                  << " links schedulable with " << test_channels << " channels\n";
        return 0;
    }

    if (ratios_cmd->parsed()) {
        const ConflictGraph g = load_conflict_graph(rat_topology);
        const auto traffic = load_traffic(rat_traffic);
        const auto verdicts = test_all_links(g, traffic, 1);
        const Histogram hd = ratio_histogram(verdicts, RatioKind::Delta, rat_bins, rat_lo, rat_hi);
        const Histogram hp =
            ratio_histogram(verdicts, RatioKind::DeltaPrime, rat_bins, rat_lo, rat_hi);
        std::ofstream out(rat_out);
        if (!out) throw InputError("cannot write " + rat_out);
        out << "metric,bin_lo,bin_hi,count\n";
        for (std::size_t b = 0; b + 1 < hd.edges.size(); ++b)
            out << "delta," << hd.edges[b] << ',' << hd.edges[b + 1] << ',' << hd.counts[b]
                << '\n';
        for (std::size_t b = 0; b + 1 < hp.edges.size(); ++b)
            out << "delta_prime," << hp.edges[b] << ',' << hp.edges[b + 1] << ','
                << hp.counts[b] << '\n';
        std::cout << "delta mean " << hd.mean << " ci [" << hd.ci_lo << ", " << hd.ci_hi
                  << "]\n"
                  << "delta_prime mean " << hp.mean << " ci [" << hp.ci_lo << ", " << hp.ci_hi
                  << "]\nwrote " << rat_out << '\n';
        return 0;
    }

    if (sim_cmd->parsed()) {
        const ConflictGraph g = load_conflict_graph(sim_topology);
        const auto traffic = load_traffic(sim_traffic);
        SimulationOptions opt;
        opt.mode = mode_from_name(sim_mode);
        opt.scheduler = scheduler_from_name(sim_sched);
        opt.seed = sim_seed;
        std::ofstream slot_out;
        if (!sim_slot_csv.empty()) {
            slot_out.open(sim_slot_csv);
            if (!slot_out) throw InputError("cannot write " + sim_slot_csv);
            slot_out << "slot,channel,active\n";
            opt.on_slot = [&slot_out](const ScheduleSlot& s) {
                for (std::size_t ch = 0; ch < s.active_per_channel.size(); ++ch)
                    slot_out << s.slot << ',' << ch << ',' << s.active_per_channel[ch].size()
                             << '\n';
            };
        }
        const SimulationReport rep = run_simulation(g, traffic, sim_channels, sim_horizon, opt);
        save_json_file(sim_out, report_to_json(rep, sim_mode, sim_sched, sim_channels,
                                               sim_horizon, sim_seed));
        std::cout << "wrote " << sim_out << ": " << rep.total_packets << " packets, "
                  << rep.total_misses << " misses, schedulable ratio "
                  << rep.schedulable_ratio << ", rounds max " << rep.max_rounds << " mean "
                  << rep.mean_rounds << '\n';
        return 0;
    }

    if (exp_cmd->parsed()) {
        ExperimentConfig config;
        if (!exp_config.empty()) config = config_from_json(load_json_file(exp_config));
        if (!exp_seeds.empty()) config.seeds = exp_seeds;
        if (!exp_channels.empty()) config.channels = exp_channels;
        if (exp_horizon) config.horizon = *exp_horizon;
        if (!exp_out_dir.empty()) config.out_dir = exp_out_dir;
        const MetricsTable table = run_experiment(config);
        namespace fs = std::filesystem;
        save_json_file((fs::path(config.out_dir) / "metrics.json").string(),
                       metrics_to_json(table));
        write_metrics_csv(table, (fs::path(config.out_dir) / "metrics.csv").string());
        write_bins_csv(table, (fs::path(config.out_dir) / "bins.csv").string());
        std::size_t failed = 0;
        for (const auto& r : table.rows)
            if (!r.error.empty()) ++failed;
        std::cout << "wrote " << config.out_dir << "/metrics.{json,csv} with "
                  << table.rows.size() << " rows";
        if (failed) std::cout << " (" << failed << " failed)";
        std::cout << '\n';
        return failed == table.rows.size() && !table.rows.empty() ? 1 : 0;
    }

    if (rep_cmd->parsed()) {
        const MetricsTable table = recompute_metrics(rep_dir);
        write_metrics_csv(table, rep_out);
        std::cout << "wrote " << rep_out << " with " << table.rows.size() << " rows\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ldp::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 2;
    } catch (const ldp::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
