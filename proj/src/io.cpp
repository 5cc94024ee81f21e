#include "icmi/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <json.hpp>

#ifndef ICMI_VERSION
#define ICMI_VERSION "dev"
#endif

namespace icmi {

namespace {

using ordered_json = nlohmann::ordered_json;

// Round through the textual form so JSON and CSV agree digit for digit.
double round9(double v)
{
    return std::strtod(format_g9(v).c_str(), nullptr);
}

ordered_json series_json(const SeriesStats& stats)
{
    ordered_json j;
    j["mean"] = ordered_json::array();
    j["sd"] = ordered_json::array();
    for (double v : stats.mean)
        j["mean"].push_back(round9(v));
    for (double v : stats.sd)
        j["sd"].push_back(round9(v));
    return j;
}

} // namespace

std::string format_g9(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t size)
{
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

std::uint64_t fnv1a64_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file for checksum: " + path);
    std::uint64_t hash = 14695981039346656037ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
    }
    return hash;
}

std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string iso8601_utc_now()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[24];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string code_version()
{
    return ICMI_VERSION;
}

void write_census_csv(std::ostream& out, const std::vector<std::vector<DailyReport>>& replicas)
{
    out << "replica,day,S,asym,presym,light,quar,severe,hosp_stable,icu,"
           "rec_s,det_s,rec_i,det_i,recovered,deceased,beds,new_inf\n";
    for (std::size_t r = 0; r < replicas.size(); ++r) {
        for (const DailyReport& rep : replicas[r]) {
            out << r << ',' << rep.day;
            for (int c : rep.census)
                out << ',' << c;
            out << ',' << rep.beds << ',' << rep.new_infections << '\n';
        }
    }
}

void write_summary_json(std::ostream& out, const EnsembleSummary& summary)
{
    ordered_json j;
    j["iterations"] = summary.iterations;
    j["node_count"] = summary.node_count;
    j["days"] = summary.days;
    j["final_infection_rate"] = {{"mean", round9(summary.final_infection_rate_mean)},
                                 {"sd", round9(summary.final_infection_rate_sd)}};
    ordered_json series;
    for (int s = 0; s < health_state_count; ++s)
        series[health_state_name(static_cast<HealthState>(s))] =
            series_json(summary.census[static_cast<std::size_t>(s)]);
    series["beds"] = series_json(summary.beds);
    series["cumulative_infected"] = series_json(summary.cumulative_infected);
    series["new_infections"] = series_json(summary.new_infections);
    j["series"] = std::move(series);
    out << j.dump(2) << '\n';
}

void write_network_stats_csv(std::ostream& out, const TemporalNetwork& network)
{
    out << "window,density,encounters,active_nodes\n";
    for (const Snapshot& snap : network.snapshots) {
        out << snap.window << ',';
        if (network.node_count >= 2)
            out << format_g9(temporal_density(snap, network.node_count));
        out << ',' << snap.encounters.size() << ',' << snap.active_nodes.size() << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const std::vector<DurationHistogramBin>& bins)
{
    out << "bin_low_s,bin_high_s,avg_daily_count\n";
    for (const DurationHistogramBin& bin : bins)
        out << bin.low_s << ',' << bin.high_s << ',' << format_g9(bin.avg_daily_count) << '\n';
}

void write_risk_grid_csv(std::ostream& out, const RiskGridResult& grid)
{
    const char* param = grid.param == RiskSweepParam::d_min ? "d_min" : "p_max";
    out << "sweep_param,sweep_value,replica,n_meetings,total_exposure_s,p_infected\n";
    for (const RiskGridRow& row : grid.rows) {
        out << param << ',' << format_g9(row.sweep_value) << ',' << row.replica << ','
            << row.n_meetings << ',' << row.total_exposure_s << ','
            << format_g9(row.p_infected) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCsvRow>& rows)
{
    out << "split_k,fraction,infection_rate_mean,infection_rate_sd\n";
    for (const SweepCsvRow& row : rows) {
        out << row.split_k << ',' << format_g9(row.fraction) << ','
            << format_g9(row.infection_rate_mean) << ',' << format_g9(row.infection_rate_sd)
            << '\n';
    }
}

void write_manifest_json(std::ostream& out, const RunManifest& manifest, const ConfigFile& config)
{
    ordered_json j;
    j["command"] = manifest.command;
    j["code_version"] = code_version();
    j["master_seed"] = manifest.master_seed;
    j["dataset"] = {{"path", manifest.dataset_path},
                    {"checksum", manifest.dataset_checksum.empty() ? "none"
                                                                   : manifest.dataset_checksum}};
    ordered_json cfg;
    for (const auto& [section, keys] : config.sections) {
        ordered_json sec;
        for (const auto& [key, value] : keys)
            sec[key] = value;
        cfg[section] = std::move(sec);
    }
    j["config"] = std::move(cfg);
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["outputs"] = manifest.outputs;
    out << j.dump(2) << '\n';
}

} // namespace icmi
