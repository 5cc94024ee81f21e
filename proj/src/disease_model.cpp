#include "icmi/disease_model.hpp"

#include <algorithm>
#include <cassert>

namespace icmi {

const char* health_state_name(HealthState s)
{
    switch (s) {
    case HealthState::Susceptible: return "susceptible";
    case HealthState::AsymptomaticInfected: return "asymptomatic";
    case HealthState::Presymptomatic: return "presymptomatic";
    case HealthState::SymptomaticLight: return "symptomatic_light";
    case HealthState::Quarantined: return "quarantined";
    case HealthState::SymptomaticSevere: return "symptomatic_severe";
    case HealthState::HospitalizedStable: return "hospitalized_stable";
    case HealthState::HospitalizedICU: return "hospitalized_icu";
    case HealthState::RecoveringS: return "recovering_stable";
    case HealthState::DeterioratingS: return "deteriorating_stable";
    case HealthState::RecoveringI: return "recovering_icu";
    case HealthState::DeterioratingI: return "deteriorating_icu";
    case HealthState::Recovered: return "recovered";
    case HealthState::Deceased: return "deceased";
    }
    return "?";
}

void ProgressionDelays::validate() const
{
    const Day all[] = {t1, t2, t3, t4, t5, t6, t7, t8, incubation_symptomatic, incubation_asymptomatic};
    for (Day d : all)
        if (d < 0)
            throw ConfigError("progression delays must be non-negative");
}

Day ProgressionDelays::max_resolution_days() const
{
    const Day hospital_path = incubation_symptomatic + t4 + 1 + std::max({t5, t6, t7, t8});
    const Day quarantine_path = incubation_symptomatic + t2 + t3;
    return std::max({t1, quarantine_path, hospital_path});
}

void on_exposure(Individual& individual, Day current_day, Rng& rng)
{
    assert(individual.state == HealthState::Susceptible && "exposure of a non-susceptible individual");
    const bool symptomatic_course = uniform01(rng) < individual.susceptibility;
    individual.state = symptomatic_course ? HealthState::Presymptomatic : HealthState::AsymptomaticInfected;
    individual.state_entry_day = current_day;
    individual.infected_on = current_day;
}

namespace {

void enter(Individual& ind, HealthState next, Day day)
{
    ind.state = next;
    ind.state_entry_day = day;
}

} // namespace

StepResult step(Individual& individual, Day current_day, const ProgressionDelays& delays, Rng& rng)
{
    StepResult result;
    if (is_terminal(individual.state) || individual.state == HealthState::Susceptible)
        return result;

    const Day elapsed = current_day - individual.state_entry_day;
    const double s = individual.susceptibility;

    switch (individual.state) {
    case HealthState::AsymptomaticInfected:
        if (elapsed >= delays.t1) {
            enter(individual, HealthState::Recovered, current_day);
            result = {true, ev_recovery};
        }
        break;

    case HealthState::Presymptomatic:
        if (elapsed >= delays.incubation_symptomatic) {
            const bool severe = uniform01(rng) < s;
            enter(individual, severe ? HealthState::SymptomaticSevere : HealthState::SymptomaticLight, current_day);
            result = {true, ev_none};
        }
        break;

    case HealthState::SymptomaticLight:
        if (elapsed >= delays.t2) {
            enter(individual, HealthState::Quarantined, current_day);
            result = {true, ev_none};
        }
        break;

    case HealthState::Quarantined:
        if (elapsed >= delays.t3) {
            enter(individual, HealthState::Recovered, current_day);
            result = {true, ev_recovery};
        }
        break;

    case HealthState::SymptomaticSevere:
        if (elapsed >= delays.t4) {
            // Ward draw first, then the outcome branch, both at entry time.
            const bool icu = uniform01(rng) < s;
            const bool deteriorate = uniform01(rng) < s;
            if (icu) {
                enter(individual, HealthState::HospitalizedICU, current_day);
                individual.hospital_outcome = deteriorate ? HealthState::DeterioratingI : HealthState::RecoveringI;
                result = {true, static_cast<std::uint8_t>(ev_hospitalized | ev_icu_entry)};
            } else {
                enter(individual, HealthState::HospitalizedStable, current_day);
                individual.hospital_outcome = deteriorate ? HealthState::DeterioratingS : HealthState::RecoveringS;
                result = {true, ev_hospitalized};
            }
        }
        break;

    case HealthState::HospitalizedStable:
    case HealthState::HospitalizedICU:
        if (elapsed >= 1) {
            enter(individual, individual.hospital_outcome, current_day);
            result = {true, ev_none};
        }
        break;

    case HealthState::RecoveringS:
        if (elapsed >= delays.t7) {
            enter(individual, HealthState::Recovered, current_day);
            result = {true, ev_recovery};
        }
        break;

    case HealthState::DeterioratingS:
        if (elapsed >= delays.t8) {
            enter(individual, HealthState::Deceased, current_day);
            result = {true, ev_death};
        }
        break;

    case HealthState::RecoveringI:
        if (elapsed >= delays.t5) {
            enter(individual, HealthState::Recovered, current_day);
            result = {true, ev_recovery};
        }
        break;

    case HealthState::DeterioratingI:
        if (elapsed >= delays.t6) {
            enter(individual, HealthState::Deceased, current_day);
            result = {true, ev_death};
        }
        break;

    default:
        break;
    }
    return result;
}

} // namespace icmi
