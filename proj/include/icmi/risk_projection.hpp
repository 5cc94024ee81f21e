#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "icmi/contagion.hpp"
#include "icmi/rng.hpp"
#include "icmi/temporal_graph.hpp"
#include "icmi/types.hpp"

namespace icmi {

// Daily distinct-contact count, pmf(x) ∝ coefficient * x^exponent renormalized
// over the integer support [min_count, max_count]. prepare() builds the
// cumulative table used by inverse-transform sampling; it must run before the
// distribution is sampled.
struct ContactCountDistribution {
    double coefficient = 0.051;
    double exponent = -0.635;
    int min_count = 1;
    int max_count = 120;
    std::vector<double> cumulative; // filled by prepare(), last entry == 1

    void prepare();
    bool ready() const { return !cumulative.empty(); }
};

// Discrete meeting-duration distribution. Either empirical (pooled encounter
// durations of a real network) or the bundled synthetic stand-in, which is
// flagged so downstream outputs can say the data was not measured.
struct DurationDistribution {
    std::vector<Seconds> values;    // ascending, all > 0
    std::vector<double> cumulative; // same size, last entry == 1
    bool synthetic = false;

    void validate() const;

    static DurationDistribution from_durations(std::vector<Seconds> samples);
    static DurationDistribution from_network(const TemporalNetwork& network);
    // Log-uniform over [300 s, 4 h] on a 300 s grid; used when no dataset is
    // supplied.
    static DurationDistribution synthetic_fallback();
};

// One uniform draw each.
int sample_contact_count(const ContactCountDistribution& dist, Rng& rng);
Seconds sample_duration(const DurationDistribution& dist, Rng& rng);

// One synthetic day: contact count first, then that many i.i.d. durations.
std::vector<Seconds> sample_day(const ContactCountDistribution& dist_n,
                                const DurationDistribution& dist_d, Rng& rng);

// Probability of infection after the given meetings, evaluated with the same
// complement-product kernel the simulation applies per day. d_min and p_max_i
// override the corresponding fields of params.
double project_risk(std::span<const Seconds> durations, Seconds d_min, double p_max_i,
                    const DiseaseParams& params);

enum class RiskSweepParam { d_min, p_max };

struct RiskGridRow {
    double sweep_value = 0.0;
    int replica = 0;
    int n_meetings = 0;
    Seconds total_exposure_s = 0;
    double p_infected = 0.0;
};

struct RiskGridResult {
    RiskSweepParam param = RiskSweepParam::d_min;
    std::vector<RiskGridRow> rows; // grouped by sweep value, replicas ascending
};

// Samples `replicas` synthetic days (stream r = derive_stream(master_seed, r))
// and scores each day under every swept value, so sweep cells share identical
// days and differ only in the swept parameter.
RiskGridResult risk_grid(const ContactCountDistribution& dist_n, const DurationDistribution& dist_d,
                         RiskSweepParam param, const std::vector<double>& sweep_values, int replicas,
                         const DiseaseParams& base, std::uint64_t master_seed);

} // namespace icmi
