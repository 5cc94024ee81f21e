#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icmi/config.hpp"
#include "icmi/io.hpp"
#include "icmi/risk_projection.hpp"
#include "icmi/simulation.hpp"
#include "icmi/synth.hpp"
#include "icmi/temporal_graph.hpp"

namespace fs = std::filesystem;
using namespace icmi;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string data_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int iterations = 0;
    bool iterations_set = false;
    int threads = 0;
};

ConfigFile load_config(const CommonOpts& opts)
{
    if (!opts.config_path.empty())
        return ConfigFile::load(opts.config_path);
    std::istringstream empty;
    return ConfigFile::from_stream(empty, "<defaults>"); // env overrides still apply
}

TemporalNetwork load_network(const CommonOpts& opts, const NetworkOptions& net,
                             RunManifest& manifest, bool gatherings)
{
    if (opts.data_path.empty())
        throw ConfigError("--data is required for this command");
    std::ifstream in(opts.data_path);
    if (!in)
        throw DataError("cannot open dataset: " + opts.data_path);
    manifest.dataset_path = opts.data_path;
    manifest.dataset_checksum = "fnv1a64:" + hex64(fnv1a64_file(opts.data_path));
    const std::vector<ScanRecord> records = load_interactions(in, net.rssi_threshold);
    TemporalNetwork network = build_network(records, net.window_length, net.scan_interval);
    if (gatherings)
        detect_gatherings(network);
    return network;
}

std::ofstream open_output(const fs::path& dir, const std::string& name,
                          RunManifest& manifest)
{
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write output file: " + path.string());
    manifest.outputs.push_back(name);
    return out;
}

void finish_manifest(const fs::path& dir, RunManifest& manifest, const ConfigFile& cfg)
{
    manifest.finished_at = iso8601_utc_now();
    manifest.outputs.push_back("manifest.json");
    const fs::path path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write output file: " + path.string());
    write_manifest_json(out, manifest, cfg);
}

// Flag overrides must land in the manifest's config snapshot, otherwise the
// manifest would not reproduce the run.
void snapshot_override(ConfigFile& cfg, const std::string& section, const std::string& key,
                       const std::string& value)
{
    cfg.sections[section][key] = value;
}

int cmd_simulate(const CommonOpts& opts)
{
    RunManifest manifest;
    manifest.command = "simulate";
    manifest.started_at = iso8601_utc_now();

    ConfigFile cfg = load_config(opts);
    ScenarioConfig scenario = scenario_from_config(cfg);
    if (opts.seed_set) {
        scenario.master_seed = opts.seed;
        snapshot_override(cfg, "scenario", "seed", std::to_string(opts.seed));
    }
    if (opts.iterations_set) {
        scenario.iterations = opts.iterations;
        snapshot_override(cfg, "scenario", "iterations", std::to_string(opts.iterations));
        scenario.validate();
    }
    manifest.master_seed = scenario.master_seed;

    const NetworkOptions net = network_from_config(cfg);
    const TemporalNetwork network = load_network(opts, net, manifest, true);
    if (network.snapshots.empty())
        throw DataError("dataset contains no usable records");

    const EnsembleResult result = run_ensemble(network, scenario, opts.threads);

    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    {
        std::ofstream out = open_output(dir, "census.csv", manifest);
        write_census_csv(out, result.replicas);
    }
    {
        std::ofstream out = open_output(dir, "summary.json", manifest);
        write_summary_json(out, result.summary);
    }
    finish_manifest(dir, manifest, cfg);
    return 0;
}

int cmd_sweep(const CommonOpts& opts)
{
    RunManifest manifest;
    manifest.command = "sweep";
    manifest.started_at = iso8601_utc_now();

    ConfigFile cfg = load_config(opts);
    ScenarioConfig scenario = scenario_from_config(cfg);
    if (opts.seed_set) {
        scenario.master_seed = opts.seed;
        snapshot_override(cfg, "scenario", "seed", std::to_string(opts.seed));
    }
    if (opts.iterations_set) {
        scenario.iterations = opts.iterations;
        snapshot_override(cfg, "scenario", "iterations", std::to_string(opts.iterations));
        scenario.validate();
    }
    manifest.master_seed = scenario.master_seed;
    const SweepOptions sweep = sweep_from_config(cfg);

    const NetworkOptions net = network_from_config(cfg);
    const TemporalNetwork network = load_network(opts, net, manifest, true);
    if (network.snapshots.empty())
        throw DataError("dataset contains no usable records");

    std::vector<SweepCsvRow> rows;
    for (int k : sweep.split_ks) {
        // Stream indices >= 2^32 are reserved for split shuffles so they can
        // never collide with replica streams.
        const TemporalNetwork* run_net = &network;
        TemporalNetwork split;
        if (k > 1) {
            split = split_density(network, k,
                                  derive_stream(scenario.master_seed,
                                                (1ull << 32) + static_cast<std::uint64_t>(k)));
            run_net = &split;
        }
        const std::vector<SweepPoint> points =
            sweep_asymptomatic(*run_net, scenario, sweep.fractions, opts.threads);
        for (const SweepPoint& p : points)
            rows.push_back({k, p.fraction, p.infection_rate_mean, p.infection_rate_sd});
    }

    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    {
        std::ofstream out = open_output(dir, "sweep.csv", manifest);
        write_sweep_csv(out, rows);
    }
    finish_manifest(dir, manifest, cfg);
    return 0;
}

int cmd_project_risk(const CommonOpts& opts)
{
    RunManifest manifest;
    manifest.command = "project-risk";
    manifest.started_at = iso8601_utc_now();

    ConfigFile cfg = load_config(opts);
    RiskOptions risk = risk_from_config(cfg);
    if (opts.seed_set) {
        risk.seed = opts.seed;
        snapshot_override(cfg, "risk", "seed", std::to_string(opts.seed));
    }
    manifest.master_seed = risk.seed;
    const DiseaseParams base = disease_from_config(cfg);

    DurationDistribution durations;
    if (!opts.data_path.empty()) {
        const NetworkOptions net = network_from_config(cfg);
        const TemporalNetwork network = load_network(opts, net, manifest, false);
        durations = DurationDistribution::from_network(network);
    } else {
        durations = DurationDistribution::synthetic_fallback();
        manifest.dataset_checksum = "none";
        std::cerr << "warning: no dataset supplied; durations drawn from the bundled "
                     "synthetic distribution, not measured data\n";
    }

    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    if (!risk.d_min_values.empty()) {
        const RiskGridResult grid =
            risk_grid(risk.counts, durations, RiskSweepParam::d_min, risk.d_min_values,
                      risk.replicas, base, derive_stream(risk.seed, 1));
        std::ofstream out = open_output(dir, "risk_dmin.csv", manifest);
        write_risk_grid_csv(out, grid);
    }
    if (!risk.p_max_values.empty()) {
        const RiskGridResult grid =
            risk_grid(risk.counts, durations, RiskSweepParam::p_max, risk.p_max_values,
                      risk.replicas, base, derive_stream(risk.seed, 2));
        std::ofstream out = open_output(dir, "risk_pmax.csv", manifest);
        write_risk_grid_csv(out, grid);
    }
    if (risk.d_min_values.empty() && risk.p_max_values.empty())
        throw ConfigError("[risk]: both sweep lists are empty; nothing to do");
    finish_manifest(dir, manifest, cfg);
    return 0;
}

int cmd_net_stats(const CommonOpts& opts, int histogram_bins)
{
    RunManifest manifest;
    manifest.command = "net-stats";
    manifest.started_at = iso8601_utc_now();

    ConfigFile cfg = load_config(opts);
    const NetworkOptions net = network_from_config(cfg);
    const TemporalNetwork network = load_network(opts, net, manifest, false);
    if (network.snapshots.empty())
        std::cerr << "warning: dataset contains no usable records; statistics are empty\n";

    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    {
        std::ofstream out = open_output(dir, "network_stats.csv", manifest);
        write_network_stats_csv(out, network);
    }
    {
        std::ofstream out = open_output(dir, "histogram.csv", manifest);
        write_histogram_csv(out, network.snapshots.empty()
                                     ? std::vector<DurationHistogramBin>{}
                                     : duration_histogram(network, histogram_bins));
    }
    finish_manifest(dir, manifest, cfg);
    return 0;
}

void add_common(CLI::App* sub, CommonOpts& opts, bool with_data)
{
    sub->add_option("--config", opts.config_path, "configuration file (defaults apply if omitted)");
    if (with_data)
        sub->add_option("--data", opts.data_path, "proximity-scan CSV dataset");
    sub->add_option("--out", opts.out_dir, "output directory")->required();
    sub->add_option("--seed", opts.seed, "master seed override");
    sub->add_option("--iterations", opts.iterations, "replica count override");
    sub->add_option("--threads", opts.threads, "worker thread cap (0 = all cores)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Contact-network contagion simulator"};
    app.set_version_flag("--version", code_version());
    app.require_subcommand(1);

    CommonOpts opts;
    int histogram_bins = 20;

    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario ensemble");
    add_common(simulate, opts, true);
    CLI::App* sweep =
        app.add_subcommand("sweep", "asymptomatic-fraction x network-density sweep");
    add_common(sweep, opts, true);
    CLI::App* risk = app.add_subcommand("project-risk", "individual daily-risk grids");
    add_common(risk, opts, true);
    CLI::App* stats = app.add_subcommand("net-stats", "dataset density and duration statistics");
    add_common(stats, opts, true);
    stats->add_option("--bins", histogram_bins, "histogram bin count")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage problems are configuration errors
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        opts.seed_set = sub->count("--seed") > 0;
        opts.iterations_set = sub->count("--iterations") > 0;
        if (sub == simulate)
            return cmd_simulate(opts);
        if (sub == sweep)
            return cmd_sweep(opts);
        if (sub == risk)
            return cmd_project_risk(opts);
        return cmd_net_stats(opts, histogram_bins);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
}
