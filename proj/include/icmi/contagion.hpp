#pragma once

#include "icmi/types.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

namespace icmi {

// How the per-day exposure probability is computed: from encounter durations
// (the piecewise kernel below) or from the bare count of infectious contacts.
enum class ContagionMode { duration_based, count_based };

// Pathogen-level parameters of the contagion kernel.
//
//   d_min      shortest encounter that can transmit (variant virality knob)
//   d_max      duration at which the per-encounter probability saturates at 1
//   p_max      probability of infection under maximal exposure
//   p_epsilon  negligible probability assigned to sub-d_min encounters
struct DiseaseParams {
    Seconds d_min = 0;
    Seconds d_max = 3600;
    double p_max = 0.5;
    double p_epsilon = 0.001;
    ContagionMode mode = ContagionMode::duration_based;

    // Rejects parameter sets for which the piecewise kernel would not be
    // monotone in duration (p_epsilon above the linear branch at d_min).
    void validate() const
    {
        if (d_min < 0 || d_max <= 0 || d_min > d_max)
            throw ConfigError("disease params: need 0 <= d_min <= d_max, d_max > 0");
        if (p_max < 0.0 || p_max > 1.0)
            throw ConfigError("disease params: p_max must be in [0,1]");
        if (p_epsilon < 0.0 || p_epsilon > 1.0)
            throw ConfigError("disease params: p_epsilon must be in [0,1]");
        if (mode == ContagionMode::duration_based && d_min > 0 &&
            p_epsilon > static_cast<double>(d_min) / static_cast<double>(d_max))
            throw ConfigError("disease params: p_epsilon exceeds d_min/d_max; kernel would not be monotone");
    }
};

// Per-encounter infection probability as a piecewise function of duration:
// p_epsilon below d_min, linear d/d_max up to d_max, then saturated at 1.
inline double encounter_prob(Seconds duration, const DiseaseParams& params)
{
    if (duration < params.d_min)
        return params.p_epsilon;
    if (duration > params.d_max)
        return 1.0;
    return static_cast<double>(duration) / static_cast<double>(params.d_max);
}

// In a gathering the transmitted load scales with the number of infectious
// participants: the exposure counts as duration * infectious_members.
inline Seconds gathering_effective_duration(Seconds duration, int infectious_members)
{
    return duration * static_cast<Seconds>(infectious_members);
}

// End-of-day exposure probability: complement of avoiding infection in every
// encounter. Empty day -> 0. The product runs in list order so that any two
// callers feeding identical inputs get bitwise-identical results.
inline double daily_infection_prob(std::span<const double> encounter_probs, double p_max)
{
    double stay_clear = 1.0;
    for (double p : encounter_probs)
        stay_clear *= 1.0 - p * p_max;
    return 1.0 - stay_clear;
}

// Count-based variant: every infectious contact carries probability p_max.
inline double daily_infection_prob_count_based(std::size_t infectious_contacts, double p_max)
{
    double stay_clear = 1.0;
    for (std::size_t i = 0; i < infectious_contacts; ++i)
        stay_clear *= 1.0 - p_max;
    return 1.0 - stay_clear;
}

} // namespace icmi
