#include "icmi/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace icmi {

void SusceptibilitySpec::validate(NodeId node_count) const
{
    const auto check01 = [](double v, const char* what) {
        if (v < 0.0 || v > 1.0)
            throw ConfigError(std::string("susceptibility: ") + what + " must be in [0,1]");
    };
    switch (kind) {
    case Kind::constant:
        check01(constant_value, "constant value");
        break;
    case Kind::mixture:
        check01(young_value, "young value");
        check01(old_value, "old value");
        check01(young_fraction, "young fraction");
        break;
    case Kind::per_node:
        if (static_cast<NodeId>(per_node.size()) != node_count)
            throw ConfigError("susceptibility: per-node vector size does not match node count");
        for (double v : per_node)
            check01(v, "per-node value");
        break;
    }
}

void ScenarioConfig::validate() const
{
    params.validate();
    delays.validate();
    if (iterations < 1)
        throw ConfigError("scenario: iterations must be >= 1");
    if (patient_zero_count < 1)
        throw ConfigError("scenario: patient_zero_count must be >= 1");
}

std::vector<NodeId> place_patients_zero(const TemporalNetwork& network, int count, Rng& rng)
{
    if (network.snapshots.empty())
        throw ConfigError("patient zero placement: network has no windows");
    const std::vector<NodeId>& active = network.snapshots.front().active_nodes;
    if (count < 1 || static_cast<std::size_t>(count) > active.size())
        throw ConfigError("patient zero placement: count must be in [1, nodes active on day 0]");

    std::vector<NodeId> pool = active;
    for (int t = 0; t < count; ++t) {
        const std::size_t j =
            static_cast<std::size_t>(t) + uniform_below(rng, pool.size() - static_cast<std::size_t>(t));
        std::swap(pool[static_cast<std::size_t>(t)], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());
    return pool;
}

namespace {

void assign_susceptibility(std::vector<Individual>& people, const SusceptibilitySpec& spec, Rng& rng)
{
    switch (spec.kind) {
    case SusceptibilitySpec::Kind::constant:
        for (Individual& p : people)
            p.susceptibility = spec.constant_value;
        break;
    case SusceptibilitySpec::Kind::mixture:
        for (Individual& p : people) // ascending id
            p.susceptibility = uniform01(rng) < spec.young_fraction ? spec.young_value : spec.old_value;
        break;
    case SusceptibilitySpec::Kind::per_node:
        for (std::size_t i = 0; i < people.size(); ++i)
            people[i].susceptibility = spec.per_node[i];
        break;
    }
}

DailyReport make_report(Day day, const std::vector<Individual>& people, int cumulative, int new_inf)
{
    DailyReport rep;
    rep.day = day;
    for (const Individual& p : people)
        ++rep.census[static_cast<std::size_t>(p.state)];
    for (const Individual& p : people)
        rep.beds += occupies_bed(p.state) ? 1 : 0;
    rep.cumulative_infected = cumulative;
    rep.new_infections = new_inf;
    return rep;
}

} // namespace

std::vector<DailyReport> run_once(const TemporalNetwork& network, const ScenarioConfig& config,
                                  std::uint64_t replica_seed)
{
    if (network.snapshots.empty())
        throw ConfigError("run_once: network has no windows");
    config.validate();
    config.susceptibility.validate(network.node_count);

    const std::size_t n = static_cast<std::size_t>(network.node_count);
    const DiseaseParams& params = config.params;
    Rng rng = make_rng(replica_seed);

    std::vector<Individual> people(n);
    for (std::size_t i = 0; i < n; ++i)
        people[i].id = static_cast<NodeId>(i);
    assign_susceptibility(people, config.susceptibility, rng);

    const std::vector<NodeId> zeros = place_patients_zero(network, config.patient_zero_count, rng);
    int cumulative = 0;
    for (NodeId z : zeros) {
        on_exposure(people[static_cast<std::size_t>(z)], 0, rng);
        ++cumulative;
    }

    const Day network_days = network.days();
    const Day extra_days = config.run_out ? config.delays.max_resolution_days() + 1 : 0;
    std::vector<DailyReport> reports;
    reports.reserve(static_cast<std::size_t>(network_days + extra_days));

    // Daily exposure accumulators, reset via the touched list.
    std::vector<double> stay_clear(n, 1.0);
    std::vector<int> contact_count(n, 0);
    std::vector<NodeId> touched;
    std::vector<std::pair<NodeId, NodeId>> contact_pairs; // (susceptible, infectious)

    const auto touch = [&](NodeId node) {
        if (stay_clear[static_cast<std::size_t>(node)] == 1.0 &&
            contact_count[static_cast<std::size_t>(node)] == 0)
            touched.push_back(node);
    };

    for (Day day = 0; day < network_days + extra_days; ++day) {
        int new_infections = 0;

        if (day < network_days) {
            const Snapshot& snap = network.snapshots[static_cast<std::size_t>(day)];

            if (params.mode == ContagionMode::duration_based) {
                // Pairwise edges, in snapshot order. Infectious states are
                // always present, so no separate presence check is needed.
                for (const Encounter& e : snap.encounters) {
                    if (e.in_gathering)
                        continue; // covered by the gathering rule below
                    const HealthState si = people[static_cast<std::size_t>(e.node_i)].state;
                    const HealthState sk = people[static_cast<std::size_t>(e.node_k)].state;
                    NodeId susceptible_node = -1;
                    if (si == HealthState::Susceptible && is_infectious(sk))
                        susceptible_node = e.node_i;
                    else if (sk == HealthState::Susceptible && is_infectious(si))
                        susceptible_node = e.node_k;
                    else
                        continue;
                    touch(susceptible_node);
                    stay_clear[static_cast<std::size_t>(susceptible_node)] *=
                        1.0 - encounter_prob(e.duration, params) * params.p_max;
                }
                for (const Gathering& g : snap.gatherings) {
                    int infectious = 0;
                    for (NodeId m : g.members)
                        infectious += is_infectious(people[static_cast<std::size_t>(m)].state) ? 1 : 0;
                    if (infectious == 0)
                        continue;
                    const Seconds effective = gathering_effective_duration(g.duration, infectious);
                    const double factor = 1.0 - encounter_prob(effective, params) * params.p_max;
                    for (NodeId m : g.members) {
                        if (people[static_cast<std::size_t>(m)].state != HealthState::Susceptible)
                            continue;
                        touch(m);
                        stay_clear[static_cast<std::size_t>(m)] *= factor;
                    }
                }
            } else {
                // Count-based: distinct infectious counterparties, whether
                // met pairwise or inside a gathering.
                contact_pairs.clear();
                for (const Encounter& e : snap.encounters) {
                    const HealthState si = people[static_cast<std::size_t>(e.node_i)].state;
                    const HealthState sk = people[static_cast<std::size_t>(e.node_k)].state;
                    if (si == HealthState::Susceptible && is_infectious(sk))
                        contact_pairs.emplace_back(e.node_i, e.node_k);
                    else if (sk == HealthState::Susceptible && is_infectious(si))
                        contact_pairs.emplace_back(e.node_k, e.node_i);
                }
                for (const Gathering& g : snap.gatherings) {
                    for (NodeId m : g.members) {
                        if (people[static_cast<std::size_t>(m)].state != HealthState::Susceptible)
                            continue;
                        for (NodeId other : g.members)
                            if (is_infectious(people[static_cast<std::size_t>(other)].state))
                                contact_pairs.emplace_back(m, other);
                    }
                }
                std::sort(contact_pairs.begin(), contact_pairs.end());
                contact_pairs.erase(std::unique(contact_pairs.begin(), contact_pairs.end()),
                                    contact_pairs.end());
                for (const auto& [sus, inf] : contact_pairs) {
                    touch(sus);
                    ++contact_count[static_cast<std::size_t>(sus)];
                }
            }

            // Exposure draws at day end, ascending node id.
            std::sort(touched.begin(), touched.end());
            for (NodeId node : touched) {
                Individual& person = people[static_cast<std::size_t>(node)];
                double p;
                if (params.mode == ContagionMode::duration_based)
                    p = 1.0 - stay_clear[static_cast<std::size_t>(node)];
                else
                    p = daily_infection_prob_count_based(
                        static_cast<std::size_t>(contact_count[static_cast<std::size_t>(node)]),
                        params.p_max);
                stay_clear[static_cast<std::size_t>(node)] = 1.0;
                contact_count[static_cast<std::size_t>(node)] = 0;
                if (p <= 0.0)
                    continue;
                if (uniform01(rng) < p) {
                    on_exposure(person, day, rng);
                    ++cumulative;
                    ++new_infections;
                }
            }
            touched.clear();
        }

        // Advance every state machine by one day, ascending id.
        for (Individual& person : people) {
            if (person.state == HealthState::Susceptible || is_terminal(person.state))
                continue;
            step(person, day, config.delays, rng);
        }

        reports.push_back(make_report(day, people, cumulative, new_infections));
    }
    return reports;
}

namespace {

// Compensated accumulation for ensemble means and variances.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x)
    {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

SeriesStats summarize(const std::vector<std::vector<double>>& per_replica, Day days)
{
    const std::size_t n = per_replica.size();
    SeriesStats stats;
    stats.mean.assign(static_cast<std::size_t>(days), 0.0);
    stats.sd.assign(static_cast<std::size_t>(days), 0.0);
    for (Day d = 0; d < days; ++d) {
        KahanSum acc;
        for (std::size_t r = 0; r < n; ++r)
            acc.add(per_replica[r][static_cast<std::size_t>(d)]);
        const double mean = acc.sum / static_cast<double>(n);
        stats.mean[static_cast<std::size_t>(d)] = mean;
        if (n > 1) {
            KahanSum sq;
            for (std::size_t r = 0; r < n; ++r) {
                const double delta = per_replica[r][static_cast<std::size_t>(d)] - mean;
                sq.add(delta * delta);
            }
            stats.sd[static_cast<std::size_t>(d)] = std::sqrt(sq.sum / static_cast<double>(n - 1));
        }
    }
    return stats;
}

} // namespace

EnsembleResult run_ensemble(const TemporalNetwork& network, const ScenarioConfig& config, int threads)
{
    config.validate();
    if (network.snapshots.empty())
        throw ConfigError("run_ensemble: network has no windows");

    const std::size_t iterations = static_cast<std::size_t>(config.iterations);
    EnsembleResult result;
    result.replicas.resize(iterations);

    int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    worker_count = std::max(1, std::min<int>(worker_count, static_cast<int>(iterations)));

    if (worker_count == 1) {
        for (std::size_t r = 0; r < iterations; ++r)
            result.replicas[r] = run_once(network, config, derive_stream(config.master_seed, r));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            workers.emplace_back([&]() {
                for (;;) {
                    const std::size_t r = next.fetch_add(1);
                    if (r >= iterations)
                        return;
                    result.replicas[r] = run_once(network, config, derive_stream(config.master_seed, r));
                }
            });
        }
        for (std::thread& w : workers)
            w.join();
    }

    const Day days = static_cast<Day>(result.replicas.front().size());

    EnsembleSummary& summary = result.summary;
    summary.iterations = config.iterations;
    summary.node_count = network.node_count;
    summary.days = days;

    std::vector<std::vector<double>> series(iterations,
                                            std::vector<double>(static_cast<std::size_t>(days)));
    const auto fill = [&](auto&& get) {
        for (std::size_t r = 0; r < iterations; ++r)
            for (Day d = 0; d < days; ++d)
                series[r][static_cast<std::size_t>(d)] =
                    get(result.replicas[r][static_cast<std::size_t>(d)]);
    };

    for (int s = 0; s < health_state_count; ++s) {
        fill([s](const DailyReport& rep) {
            return static_cast<double>(rep.census[static_cast<std::size_t>(s)]);
        });
        summary.census[static_cast<std::size_t>(s)] = summarize(series, days);
    }
    fill([](const DailyReport& rep) { return static_cast<double>(rep.beds); });
    summary.beds = summarize(series, days);
    fill([](const DailyReport& rep) { return static_cast<double>(rep.cumulative_infected); });
    summary.cumulative_infected = summarize(series, days);
    fill([](const DailyReport& rep) { return static_cast<double>(rep.new_infections); });
    summary.new_infections = summarize(series, days);

    KahanSum rate_acc;
    for (std::size_t r = 0; r < iterations; ++r)
        rate_acc.add(static_cast<double>(result.replicas[r].back().cumulative_infected) /
                     static_cast<double>(network.node_count));
    summary.final_infection_rate_mean = rate_acc.sum / static_cast<double>(iterations);
    if (iterations > 1) {
        KahanSum sq;
        for (std::size_t r = 0; r < iterations; ++r) {
            const double delta = static_cast<double>(result.replicas[r].back().cumulative_infected) /
                                     static_cast<double>(network.node_count) -
                                 summary.final_infection_rate_mean;
            sq.add(delta * delta);
        }
        summary.final_infection_rate_sd = std::sqrt(sq.sum / static_cast<double>(iterations - 1));
    }
    return result;
}

std::vector<SweepPoint> sweep_asymptomatic(const TemporalNetwork& network,
                                           const ScenarioConfig& config,
                                           const std::vector<double>& fractions, int threads)
{
    std::vector<SweepPoint> points;
    points.reserve(fractions.size());
    for (double f : fractions) {
        if (!(f > 0.0 && f < 1.0))
            throw ConfigError("sweep: asymptomatic fractions must lie in (0,1)");
        ScenarioConfig cell = config;
        cell.susceptibility.kind = SusceptibilitySpec::Kind::constant;
        cell.susceptibility.constant_value = 1.0 - f;
        const EnsembleResult run = run_ensemble(network, cell, threads);
        points.push_back({f, run.summary.final_infection_rate_mean, run.summary.final_infection_rate_sd});
    }
    return points;
}

std::vector<std::pair<Day, int>> beds_timeseries(const std::vector<DailyReport>& reports)
{
    std::vector<std::pair<Day, int>> series;
    series.reserve(reports.size());
    for (const DailyReport& rep : reports)
        series.emplace_back(rep.day, rep.beds);
    return series;
}

} // namespace icmi
