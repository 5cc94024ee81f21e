#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "icmi/config.hpp"
#include "icmi/risk_projection.hpp"
#include "icmi/simulation.hpp"
#include "icmi/temporal_graph.hpp"

namespace icmi {

// All floating-point output goes through 9-significant-digit formatting so
// repeated runs produce byte-identical files.
std::string format_g9(double v);

// FNV-1a, 64-bit — dataset fingerprint for the run manifest.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::string& path); // DataError if unreadable
std::string hex64(std::uint64_t v);

std::string iso8601_utc_now();
std::string code_version();

// `replica,day,S,asym,...,deceased,beds,new_inf` — one row per replica-day.
void write_census_csv(std::ostream& out, const std::vector<std::vector<DailyReport>>& replicas);

void write_summary_json(std::ostream& out, const EnsembleSummary& summary);

// `window,density,encounters,active_nodes`; density blank when the network
// has fewer than two nodes.
void write_network_stats_csv(std::ostream& out, const TemporalNetwork& network);

// `bin_low_s,bin_high_s,avg_daily_count`
void write_histogram_csv(std::ostream& out, const std::vector<DurationHistogramBin>& bins);

// `sweep_param,sweep_value,replica,n_meetings,total_exposure_s,p_infected`
void write_risk_grid_csv(std::ostream& out, const RiskGridResult& grid);

struct SweepCsvRow {
    int split_k = 1;
    double fraction = 0.0;
    double infection_rate_mean = 0.0;
    double infection_rate_sd = 0.0;
};

// `split_k,fraction,infection_rate_mean,infection_rate_sd`
void write_sweep_csv(std::ostream& out, const std::vector<SweepCsvRow>& rows);

// Everything needed to rerun the command and get byte-identical outputs:
// config snapshot, seed, dataset fingerprint, and the artifact list.
struct RunManifest {
    std::string command;
    std::uint64_t master_seed = 0;
    std::string dataset_path;     // empty when no dataset was read
    std::string dataset_checksum; // "fnv1a64:<hex>" or "none"
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> outputs; // paths relative to the out dir
};

void write_manifest_json(std::ostream& out, const RunManifest& manifest, const ConfigFile& config);

} // namespace icmi
