#include "icmi/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace icmi {

namespace {

// Single source of truth for valid keys; also drives env-var lookup.
const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> s = {
        {"disease", {"mode", "d_min", "d_max", "p_max", "p_epsilon"}},
        {"delays",
         {"t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "incubation_symptomatic",
          "incubation_asymptomatic"}},
        {"network", {"rssi_threshold", "scan_interval", "window_length"}},
        {"scenario",
         {"susceptibility", "patient_zeros", "iterations", "seed", "run_out", "threads"}},
        {"sweep", {"fractions", "split_k"}},
        {"risk",
         {"replicas", "seed", "count_coefficient", "count_exponent", "count_min", "count_max",
          "d_min_values", "p_max_values"}},
    };
    return s;
}

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string upper(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

// Strips a '#' comment that starts the line or follows whitespace.
std::string strip_comment(const std::string& line)
{
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] != '#')
            continue;
        if (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))
            return line.substr(0, i);
    }
    return line;
}

std::vector<std::string> split_csv(const std::string& text)
{
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ','))
        parts.push_back(trim(item));
    if (!parts.empty() && parts.back().empty())
        parts.pop_back();
    return parts;
}

double parse_double(const std::string& text, const std::string& where)
{
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError(where + ": not a number: '" + text + "'");
    return v;
}

std::int64_t parse_int(const std::string& text, const std::string& where)
{
    const std::string t = trim(text);
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ConfigError(where + ": not an integer: '" + text + "'");
    return v;
}

void apply_env_overrides(ConfigFile& cfg)
{
    for (const auto& [section, keys] : schema()) {
        for (const std::string& key : keys) {
            const std::string var = "ICMI_" + upper(section) + "_" + upper(key);
            if (const char* value = std::getenv(var.c_str()))
                cfg.sections[section][key] = value;
        }
    }
}

} // namespace

ConfigFile ConfigFile::from_stream(std::istream& in, const std::string& name)
{
    ConfigFile cfg;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(strip_comment(line));
        if (text.empty())
            continue;
        const std::string where = name + ":" + std::to_string(line_no);
        if (text.front() == '[') {
            if (text.back() != ']')
                throw ConfigError(where + ": unterminated section header");
            section = lower(trim(text.substr(1, text.size() - 2)));
            if (!schema().count(section))
                throw ConfigError(where + ": unknown section [" + section + "]");
            cfg.sections[section]; // present even if empty
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value");
        if (section.empty())
            throw ConfigError(where + ": key outside any [section]");
        const std::string key = lower(trim(text.substr(0, eq)));
        if (!schema().at(section).count(key))
            throw ConfigError(where + ": unknown key '" + key + "' in [" + section + "]");
        cfg.sections[section][key] = trim(text.substr(eq + 1));
    }
    apply_env_overrides(cfg);
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    return from_stream(in, path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const
{
    const auto sit = sections.find(section);
    return sit != sections.end() && sit->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const
{
    const auto sit = sections.find(section);
    if (sit == sections.end())
        return fallback;
    const auto kit = sit->second.find(key);
    return kit == sit->second.end() ? fallback : kit->second;
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key,
                                 std::int64_t fallback) const
{
    if (!has(section, key))
        return fallback;
    return parse_int(get(section, key, ""), "[" + section + "] " + key);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const
{
    if (!has(section, key))
        return fallback;
    return parse_double(get(section, key, ""), "[" + section + "] " + key);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const
{
    if (!has(section, key))
        return fallback;
    const std::string v = lower(get(section, key, ""));
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError("[" + section + "] " + key + ": not a boolean: '" + v + "'");
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key,
                                            const std::vector<double>& fallback) const
{
    if (!has(section, key))
        return fallback;
    std::vector<double> out;
    for (const std::string& part : split_csv(get(section, key, "")))
        out.push_back(parse_double(part, "[" + section + "] " + key));
    return out;
}

std::vector<int> ConfigFile::get_ints(const std::string& section, const std::string& key,
                                      const std::vector<int>& fallback) const
{
    if (!has(section, key))
        return fallback;
    std::vector<int> out;
    for (const std::string& part : split_csv(get(section, key, "")))
        out.push_back(static_cast<int>(parse_int(part, "[" + section + "] " + key)));
    return out;
}

SusceptibilitySpec parse_susceptibility(const std::string& text)
{
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("susceptibility: expected constant:<s> | mixture:<young>,<old>,<frac> "
                          "| file:<path>, got '" +
                          text + "'");
    const std::string kind = lower(trim(text.substr(0, colon)));
    const std::string rest = trim(text.substr(colon + 1));
    SusceptibilitySpec spec;
    if (kind == "constant") {
        spec.kind = SusceptibilitySpec::Kind::constant;
        spec.constant_value = parse_double(rest, "susceptibility constant");
    } else if (kind == "mixture") {
        const std::vector<std::string> parts = split_csv(rest);
        if (parts.size() != 3)
            throw ConfigError("susceptibility mixture: expected <young>,<old>,<young_fraction>");
        spec.kind = SusceptibilitySpec::Kind::mixture;
        spec.young_value = parse_double(parts[0], "susceptibility mixture young");
        spec.old_value = parse_double(parts[1], "susceptibility mixture old");
        spec.young_fraction = parse_double(parts[2], "susceptibility mixture fraction");
    } else if (kind == "file") {
        std::ifstream in(rest);
        if (!in)
            throw ConfigError("susceptibility file: cannot open " + rest);
        spec.kind = SusceptibilitySpec::Kind::per_node;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string v = trim(strip_comment(line));
            if (v.empty())
                continue;
            spec.per_node.push_back(
                parse_double(v, rest + ":" + std::to_string(line_no)));
        }
    } else {
        throw ConfigError("susceptibility: unknown kind '" + kind + "'");
    }
    return spec;
}

DiseaseParams disease_from_config(const ConfigFile& cfg)
{
    DiseaseParams params;
    const std::string mode = lower(cfg.get("disease", "mode", "duration"));
    if (mode == "duration")
        params.mode = ContagionMode::duration_based;
    else if (mode == "count")
        params.mode = ContagionMode::count_based;
    else
        throw ConfigError("[disease] mode: expected 'duration' or 'count', got '" + mode + "'");
    params.d_min = cfg.get_int("disease", "d_min", 0);
    params.d_max = cfg.get_int("disease", "d_max", 3600);
    params.p_max = cfg.get_double("disease", "p_max", 0.5);
    params.p_epsilon = cfg.get_double("disease", "p_epsilon", 0.001);
    params.validate();
    return params;
}

ProgressionDelays delays_from_config(const ConfigFile& cfg)
{
    ProgressionDelays d;
    d.t1 = static_cast<Day>(cfg.get_int("delays", "t1", d.t1));
    d.t2 = static_cast<Day>(cfg.get_int("delays", "t2", d.t2));
    d.t3 = static_cast<Day>(cfg.get_int("delays", "t3", d.t3));
    d.t4 = static_cast<Day>(cfg.get_int("delays", "t4", d.t4));
    d.t5 = static_cast<Day>(cfg.get_int("delays", "t5", d.t5));
    d.t6 = static_cast<Day>(cfg.get_int("delays", "t6", d.t6));
    d.t7 = static_cast<Day>(cfg.get_int("delays", "t7", d.t7));
    d.t8 = static_cast<Day>(cfg.get_int("delays", "t8", d.t8));
    d.incubation_symptomatic =
        static_cast<Day>(cfg.get_int("delays", "incubation_symptomatic", d.incubation_symptomatic));
    d.incubation_asymptomatic = static_cast<Day>(
        cfg.get_int("delays", "incubation_asymptomatic", d.incubation_asymptomatic));
    d.validate();
    return d;
}

NetworkOptions network_from_config(const ConfigFile& cfg)
{
    NetworkOptions opt;
    opt.rssi_threshold = static_cast<int>(cfg.get_int("network", "rssi_threshold", -90));
    opt.scan_interval = cfg.get_int("network", "scan_interval", 300);
    opt.window_length = cfg.get_int("network", "window_length", 86400);
    if (opt.scan_interval <= 0 || opt.window_length <= 0)
        throw ConfigError("[network] scan_interval and window_length must be > 0");
    if (opt.window_length % opt.scan_interval != 0)
        throw ConfigError("[network] window_length must be a multiple of scan_interval");
    return opt;
}

ScenarioConfig scenario_from_config(const ConfigFile& cfg)
{
    ScenarioConfig sc;
    sc.params = disease_from_config(cfg);
    sc.delays = delays_from_config(cfg);
    sc.susceptibility =
        parse_susceptibility(cfg.get("scenario", "susceptibility", "mixture:0.1,0.9,0.8"));
    sc.patient_zero_count = static_cast<int>(cfg.get_int("scenario", "patient_zeros", 1));
    sc.iterations = static_cast<int>(cfg.get_int("scenario", "iterations", 200));
    sc.master_seed = static_cast<std::uint64_t>(cfg.get_int("scenario", "seed", 1));
    sc.run_out = cfg.get_bool("scenario", "run_out", true);
    sc.validate();
    return sc;
}

SweepOptions sweep_from_config(const ConfigFile& cfg)
{
    SweepOptions opt;
    opt.fractions = cfg.get_doubles("sweep", "fractions", {});
    opt.split_ks = cfg.get_ints("sweep", "split_k", {1});
    if (opt.fractions.empty())
        throw ConfigError("[sweep] fractions: list must be non-empty");
    for (int k : opt.split_ks)
        if (k < 1)
            throw ConfigError("[sweep] split_k: values must be >= 1");
    return opt;
}

RiskOptions risk_from_config(const ConfigFile& cfg)
{
    RiskOptions opt;
    opt.counts.coefficient = cfg.get_double("risk", "count_coefficient", 0.051);
    opt.counts.exponent = cfg.get_double("risk", "count_exponent", -0.635);
    opt.counts.min_count = static_cast<int>(cfg.get_int("risk", "count_min", 1));
    opt.counts.max_count = static_cast<int>(cfg.get_int("risk", "count_max", 120));
    opt.counts.prepare();
    opt.d_min_values = cfg.get_doubles("risk", "d_min_values", {0, 60, 300, 900});
    opt.p_max_values = cfg.get_doubles("risk", "p_max_values", {1.0, 0.75, 0.5, 0.25});
    opt.replicas = static_cast<int>(cfg.get_int("risk", "replicas", 200));
    opt.seed = static_cast<std::uint64_t>(cfg.get_int("risk", "seed", 1));
    if (opt.replicas < 1)
        throw ConfigError("[risk] replicas must be >= 1");
    return opt;
}

} // namespace icmi
