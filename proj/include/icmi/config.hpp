#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "icmi/risk_projection.hpp"
#include "icmi/simulation.hpp"
#include "icmi/types.hpp"

namespace icmi {

// Flat key-value configuration with [section] headers, '#' comments, and
// ICMI_<SECTION>_<KEY> environment overrides. Sections and keys are checked
// against the known schema so typos fail loudly (exit code 2).
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    static ConfigFile load(const std::string& path);
    static ConfigFile from_stream(std::istream& in, const std::string& name);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    const std::vector<double>& fallback) const;
    std::vector<int> get_ints(const std::string& section, const std::string& key,
                              const std::vector<int>& fallback) const;
};

struct NetworkOptions {
    int rssi_threshold = -90;
    Seconds scan_interval = 300;
    Seconds window_length = 86400;
};

struct SweepOptions {
    std::vector<double> fractions;
    std::vector<int> split_ks{1};
};

struct RiskOptions {
    ContactCountDistribution counts; // prepared
    std::vector<double> d_min_values;
    std::vector<double> p_max_values;
    int replicas = 200;
    std::uint64_t seed = 1;
};

// `constant:<s>` | `mixture:<young>,<old>,<young_fraction>` | `file:<path>`
// (one value per line, line i = node i).
SusceptibilitySpec parse_susceptibility(const std::string& text);

DiseaseParams disease_from_config(const ConfigFile& cfg);
ProgressionDelays delays_from_config(const ConfigFile& cfg);
NetworkOptions network_from_config(const ConfigFile& cfg);
ScenarioConfig scenario_from_config(const ConfigFile& cfg);
SweepOptions sweep_from_config(const ConfigFile& cfg);
RiskOptions risk_from_config(const ConfigFile& cfg);

} // namespace icmi
