#pragma once

#include "icmi/rng.hpp"
#include "icmi/types.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace icmi {

// Individual health states. Deceased and Recovered are terminal.
enum class HealthState : std::uint8_t {
    Susceptible = 0,
    AsymptomaticInfected,
    Presymptomatic,
    SymptomaticLight,
    Quarantined,
    SymptomaticSevere,
    HospitalizedStable,
    HospitalizedICU,
    RecoveringS,
    DeterioratingS,
    RecoveringI,
    DeterioratingI,
    Recovered,
    Deceased,
};

inline constexpr int health_state_count = 14;

const char* health_state_name(HealthState s);

// Timed-transition delays of the progression graph, in days (simulation
// windows). Defaults follow commonly cited COVID-19 timelines and are
// non-normative; every value is overridable from the scenario config.
struct ProgressionDelays {
    Day t1 = 7;  // asymptomatic course, infection -> recovery
    Day t2 = 2;  // light symptoms -> quarantine
    Day t3 = 12; // quarantine -> recovery
    Day t4 = 5;  // severe symptoms -> hospitalization
    Day t5 = 14; // hospitalized ICU, recovering -> recovered
    Day t6 = 10; // hospitalized ICU, deteriorating -> death
    Day t7 = 10; // hospitalized stable, recovering -> recovered
    Day t8 = 7;  // hospitalized stable, deteriorating -> death
    Day incubation_symptomatic = 5;  // presymptomatic -> symptoms
    Day incubation_asymptomatic = 5; // accepted for configs, not consulted by
                                     // the transition table (no edge uses it)

    void validate() const;

    // Worst-case days from infection to a terminal state; one day is spent in
    // the Hospitalized* states before the pre-drawn outcome branch applies.
    Day max_resolution_days() const;
};

// One simulated person. susceptibility (s_i in [0,1]) drives every
// probabilistic branch of the progression: symptomatic vs asymptomatic,
// severe vs light, ICU vs stable, deteriorate vs recover.
struct Individual {
    NodeId id = 0;
    double susceptibility = 0.0;
    HealthState state = HealthState::Susceptible;
    Day state_entry_day = 0;
    Day infected_on = -1; // -1 = never infected

    // Outcome branch drawn once at hospital entry, applied a day later.
    HealthState hospital_outcome = HealthState::Susceptible;
};

// Events emitted by step(), as a bitmask.
enum ProgressionEvent : std::uint8_t {
    ev_none = 0,
    ev_hospitalized = 1 << 0,
    ev_icu_entry = 1 << 1,
    ev_death = 1 << 2,
    ev_recovery = 1 << 3,
};

struct StepResult {
    bool changed = false;
    std::uint8_t events = ev_none;
};

// Exposure branch: symptomatic course with probability s_i, asymptomatic
// otherwise. One uniform draw. Caller guarantees the individual is
// Susceptible; the contagion layer has already decided the exposure.
void on_exposure(Individual& individual, Day current_day, Rng& rng);

// Advances one individual by one day: fires the transition whose delay has
// elapsed since state entry, if any. Probabilistic forks draw uniforms in a
// fixed order (severity; then at hospitalization ward first, outcome second),
// so a run is fully determined by its seed and the call order.
StepResult step(Individual& individual, Day current_day, const ProgressionDelays& delays, Rng& rng);

// Infectious toward others: asymptomatic or presymptomatic carriers only.
// Symptomatic individuals are out of the contact network (see is_present).
inline bool is_infectious(HealthState s)
{
    return s == HealthState::AsymptomaticInfected || s == HealthState::Presymptomatic;
}

// Participates in the interaction network. Symptom onset removes a person;
// recovery re-introduces them (immune).
inline bool is_present(HealthState s)
{
    switch (s) {
    case HealthState::Susceptible:
    case HealthState::AsymptomaticInfected:
    case HealthState::Presymptomatic:
    case HealthState::Recovered:
        return true;
    default:
        return false;
    }
}

// Occupies a hospital bed.
inline bool occupies_bed(HealthState s)
{
    switch (s) {
    case HealthState::HospitalizedStable:
    case HealthState::HospitalizedICU:
    case HealthState::RecoveringS:
    case HealthState::DeterioratingS:
    case HealthState::RecoveringI:
    case HealthState::DeterioratingI:
        return true;
    default:
        return false;
    }
}

inline bool is_terminal(HealthState s)
{
    return s == HealthState::Recovered || s == HealthState::Deceased;
}

} // namespace icmi
