#include "icmi/risk_projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace icmi {

void ContactCountDistribution::prepare()
{
    if (min_count < 0 || max_count < min_count)
        throw ConfigError("contact-count distribution: need 0 <= min_count <= max_count");
    if (coefficient <= 0.0)
        throw ConfigError("contact-count distribution: coefficient must be > 0");
    if (min_count == 0 && exponent < 0.0)
        throw ConfigError("contact-count distribution: support cannot include 0 with a negative exponent");

    cumulative.clear();
    cumulative.reserve(static_cast<std::size_t>(max_count - min_count + 1));
    double total = 0.0;
    for (int x = min_count; x <= max_count; ++x) {
        total += coefficient * std::pow(static_cast<double>(x), exponent);
        cumulative.push_back(total);
    }
    for (double& c : cumulative)
        c /= total;
    cumulative.back() = 1.0;
}

void DurationDistribution::validate() const
{
    if (values.empty() || values.size() != cumulative.size())
        throw ConfigError("duration distribution: empty or inconsistent tables");
    if (!std::is_sorted(values.begin(), values.end()) || values.front() <= 0)
        throw ConfigError("duration distribution: durations must be positive and ascending");
    if (std::abs(cumulative.back() - 1.0) > 1e-9 ||
        !std::is_sorted(cumulative.begin(), cumulative.end()))
        throw ConfigError("duration distribution: weights must accumulate to 1");
}

DurationDistribution DurationDistribution::from_durations(std::vector<Seconds> samples)
{
    if (samples.empty())
        throw DataError("duration distribution: no durations to fit");
    std::map<Seconds, std::size_t> counts;
    for (Seconds d : samples) {
        if (d <= 0)
            throw DataError("duration distribution: non-positive duration");
        ++counts[d];
    }
    DurationDistribution dist;
    double running = 0.0;
    const double total = static_cast<double>(samples.size());
    for (const auto& [value, count] : counts) {
        running += static_cast<double>(count) / total;
        dist.values.push_back(value);
        dist.cumulative.push_back(running);
    }
    dist.cumulative.back() = 1.0;
    return dist;
}

DurationDistribution DurationDistribution::from_network(const TemporalNetwork& network)
{
    std::vector<Seconds> pooled;
    for (const Snapshot& snap : network.snapshots)
        for (const Encounter& e : snap.encounters)
            pooled.push_back(e.duration);
    if (pooled.empty())
        throw DataError("duration distribution: network has no encounters");
    return from_durations(std::move(pooled));
}

DurationDistribution DurationDistribution::synthetic_fallback()
{
    // Density ∝ 1/d on a 300 s grid spanning 300 s .. 4 h, i.e. log-uniform
    // once discretized.
    DurationDistribution dist;
    double total = 0.0;
    for (Seconds d = 300; d <= 14400; d += 300) {
        dist.values.push_back(d);
        total += 1.0 / static_cast<double>(d);
    }
    double running = 0.0;
    for (Seconds d : dist.values) {
        running += 1.0 / static_cast<double>(d) / total;
        dist.cumulative.push_back(running);
    }
    dist.cumulative.back() = 1.0;
    dist.synthetic = true;
    return dist;
}

int sample_contact_count(const ContactCountDistribution& dist, Rng& rng)
{
    if (!dist.ready())
        throw ConfigError("contact-count distribution: prepare() not called");
    const double u = uniform01(rng);
    const auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
    const std::size_t idx = std::min(static_cast<std::size_t>(it - dist.cumulative.begin()),
                                     dist.cumulative.size() - 1);
    return dist.min_count + static_cast<int>(idx);
}

Seconds sample_duration(const DurationDistribution& dist, Rng& rng)
{
    const double u = uniform01(rng);
    const auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
    const std::size_t idx =
        std::min(static_cast<std::size_t>(it - dist.cumulative.begin()), dist.values.size() - 1);
    return dist.values[idx];
}

std::vector<Seconds> sample_day(const ContactCountDistribution& dist_n,
                                const DurationDistribution& dist_d, Rng& rng)
{
    const int n = sample_contact_count(dist_n, rng);
    std::vector<Seconds> day(static_cast<std::size_t>(n));
    for (Seconds& d : day)
        d = sample_duration(dist_d, rng);
    return day;
}

double project_risk(std::span<const Seconds> durations, Seconds d_min, double p_max_i,
                    const DiseaseParams& params)
{
    DiseaseParams local = params;
    local.d_min = d_min;
    local.p_max = p_max_i;
    local.validate();
    double stay_clear = 1.0;
    for (Seconds d : durations)
        stay_clear *= 1.0 - encounter_prob(d, local) * local.p_max;
    return 1.0 - stay_clear;
}

RiskGridResult risk_grid(const ContactCountDistribution& dist_n, const DurationDistribution& dist_d,
                         RiskSweepParam param, const std::vector<double>& sweep_values, int replicas,
                         const DiseaseParams& base, std::uint64_t master_seed)
{
    if (sweep_values.empty())
        throw ConfigError("risk grid: sweep has no values");
    if (replicas < 1)
        throw ConfigError("risk grid: replicas must be >= 1");
    dist_d.validate();
    if (!dist_n.ready())
        throw ConfigError("contact-count distribution: prepare() not called");

    // One synthetic day per replica, shared across all swept values.
    std::vector<std::vector<Seconds>> days;
    days.reserve(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
        Rng rng = make_rng(derive_stream(master_seed, static_cast<std::uint64_t>(r)));
        days.push_back(sample_day(dist_n, dist_d, rng));
    }

    RiskGridResult result;
    result.param = param;
    result.rows.reserve(sweep_values.size() * static_cast<std::size_t>(replicas));
    for (double value : sweep_values) {
        const Seconds d_min =
            param == RiskSweepParam::d_min ? static_cast<Seconds>(std::llround(value)) : base.d_min;
        const double p_max = param == RiskSweepParam::p_max ? value : base.p_max;
        for (int r = 0; r < replicas; ++r) {
            const std::vector<Seconds>& day = days[static_cast<std::size_t>(r)];
            RiskGridRow row;
            row.sweep_value = value;
            row.replica = r;
            row.n_meetings = static_cast<int>(day.size());
            row.total_exposure_s = 0;
            for (Seconds d : day)
                row.total_exposure_s += d;
            row.p_infected = project_risk(day, d_min, p_max, base);
            result.rows.push_back(row);
        }
    }
    return result;
}

} // namespace icmi
