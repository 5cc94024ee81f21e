#pragma once

#include "icmi/contagion.hpp"
#include "icmi/disease_model.hpp"
#include "icmi/rng.hpp"
#include "icmi/temporal_graph.hpp"
#include "icmi/types.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace icmi {

// Community susceptibility assignment: a constant s_i, a two-point
// young/old mixture, or an explicit per-node vector.
struct SusceptibilitySpec {
    enum class Kind { constant, mixture, per_node };
    Kind kind = Kind::constant;
    double constant_value = 0.2;
    double young_value = 0.1;
    double old_value = 0.9;
    double young_fraction = 0.8;
    std::vector<double> per_node;

    void validate(NodeId node_count) const;
};

struct ScenarioConfig {
    DiseaseParams params;
    ProgressionDelays delays;
    SusceptibilitySpec susceptibility;
    int patient_zero_count = 1;
    int iterations = 200;
    std::uint64_t master_seed = 1;

    // When set, the day loop continues past the last network window (with no
    // encounters) for a fixed resolution margin so every infection reaches a
    // terminal state. All replicas get the same number of extra days.
    bool run_out = false;

    void validate() const;
};

// End-of-day census of one replica day.
struct DailyReport {
    Day day = 0;
    std::array<int, health_state_count> census{};
    int beds = 0;
    int cumulative_infected = 0;
    int new_infections = 0;
};

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> sd;
};

struct EnsembleSummary {
    int iterations = 0;
    NodeId node_count = 0;
    Day days = 0;
    std::array<SeriesStats, health_state_count> census;
    SeriesStats beds;
    SeriesStats cumulative_infected;
    SeriesStats new_infections;
    double final_infection_rate_mean = 0.0;
    double final_infection_rate_sd = 0.0;
};

struct EnsembleResult {
    EnsembleSummary summary;
    std::vector<std::vector<DailyReport>> replicas;
};

// Uniform sample without replacement from the nodes active on day 0.
// Returned sorted ascending. Throws ConfigError if count is out of range.
std::vector<NodeId> place_patients_zero(const TemporalNetwork& network, int count, Rng& rng);

// One replica. The day loop: collect each susceptible node's encounters with
// infectious counterparties, apply the gathering effective-duration rule,
// compute the per-node daily exposure probability, draw exposures at day
// end against the infectious set from the start of the day, then advance
// every state machine by one day.
//
// The replica stream is consumed in a fixed order: susceptibility draws
// (mixture spec only, ascending node id), patient-zero selection, patient-
// zero exposure branches (ascending id), then per day first the exposure
// draws over nodes with positive probability (ascending id, each successful
// draw immediately followed by that node's branch draw) and second the
// state-machine advancement draws (ascending id).
std::vector<DailyReport> run_once(const TemporalNetwork& network, const ScenarioConfig& config,
                                  std::uint64_t replica_seed);

// Runs config.iterations independent replicas with streams derived from
// master_seed and aggregates per-day means and standard deviations.
// Replica results do not depend on the thread count or schedule.
EnsembleResult run_ensemble(const TemporalNetwork& network, const ScenarioConfig& config,
                            int threads = 0);

struct SweepPoint {
    double fraction = 0.0;
    double infection_rate_mean = 0.0;
    double infection_rate_sd = 0.0;
};

// For each requested asymptomatic fraction f, runs an ensemble with the
// constant susceptibility s_i = 1 - f (the asymptomatic share among the
// infected is exactly 1 - s_i) and records the final cumulative infection
// rate. The same master seed is reused across fractions so the points share
// patient-zero placements.
std::vector<SweepPoint> sweep_asymptomatic(const TemporalNetwork& network,
                                           const ScenarioConfig& config,
                                           const std::vector<double>& fractions, int threads = 0);

// Hospital-bed demand series of one replica.
std::vector<std::pair<Day, int>> beds_timeseries(const std::vector<DailyReport>& reports);

} // namespace icmi
