#include "icmi/synth.hpp"

#include <algorithm>
#include <tuple>

#include "icmi/rng.hpp"

namespace icmi {

namespace {

struct PairPick {
    NodeId a;
    NodeId b;
};

PairPick pick_pair(Rng& rng, int nodes)
{
    const auto a = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(nodes)));
    auto b = static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(nodes - 1)));
    if (b >= a)
        ++b;
    return {a, b};
}

} // namespace

std::vector<ScanRecord> synth_scans(const SynthParams& params)
{
    if (params.nodes < 2 || params.days < 1 || params.scan_interval <= 0 ||
        params.window_length % params.scan_interval != 0 || params.max_run_scans < 1)
        throw ConfigError("synth: invalid generator parameters");

    Rng rng = make_rng(params.seed);
    const Seconds slots = params.window_length / params.scan_interval;
    const int meetings_per_day = std::max(
        1, static_cast<int>(params.meetings_per_node_day * params.nodes / 2.0 + 0.5));

    std::vector<ScanRecord> records;
    for (int day = 0; day < params.days; ++day) {
        const Seconds day_base = static_cast<Seconds>(day) * params.window_length;

        for (int m = 0; m < meetings_per_day; ++m) {
            const PairPick pair = pick_pair(rng, params.nodes);
            int run = 1;
            if (params.max_run_scans > 1 && uniform01(rng) >= params.single_scan_fraction)
                run = 2 + static_cast<int>(
                              uniform_below(rng, static_cast<std::uint64_t>(params.max_run_scans - 1)));
            const Seconds start_slot = static_cast<Seconds>(
                uniform_below(rng, static_cast<std::uint64_t>(slots - run + 1)));
            for (int k = 0; k < run; ++k) {
                const Seconds ts = day_base + (start_slot + k) * params.scan_interval;
                records.push_back({ts, pair.a, pair.b, params.rssi});
            }
        }

        const int gatherings =
            static_cast<int>(params.gatherings_per_day) +
            (uniform01(rng) < params.gatherings_per_day - static_cast<int>(params.gatherings_per_day)
                 ? 1
                 : 0);
        for (int g = 0; g < gatherings; ++g) {
            const int size = 3 + static_cast<int>(uniform_below(rng, 4)); // 3..6 members
            std::vector<NodeId> members;
            while (static_cast<int>(members.size()) < size) {
                const auto node =
                    static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(params.nodes)));
                if (std::find(members.begin(), members.end(), node) == members.end())
                    members.push_back(node);
            }
            const int run = 1 + static_cast<int>(uniform_below(rng, 8)); // 1..8 scans
            const Seconds start_slot = static_cast<Seconds>(
                uniform_below(rng, static_cast<std::uint64_t>(slots - run + 1)));
            for (int k = 0; k < run; ++k) {
                const Seconds ts = day_base + (start_slot + k) * params.scan_interval;
                for (std::size_t i = 0; i < members.size(); ++i)
                    for (std::size_t j = i + 1; j < members.size(); ++j)
                        records.push_back({ts, members[i], members[j], params.rssi});
            }
        }

        if (params.noise) {
            // A weak scan and an out-of-study device per day; the loader must
            // drop both.
            const PairPick weak = pick_pair(rng, params.nodes);
            records.push_back({day_base, weak.a, weak.b, -95});
            const auto lone =
                static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(params.nodes)));
            records.push_back({day_base, lone, -1, params.rssi});
        }
    }

    std::sort(records.begin(), records.end(), [](const ScanRecord& x, const ScanRecord& y) {
        return std::tie(x.timestamp, x.user_a, x.user_b) < std::tie(y.timestamp, y.user_a, y.user_b);
    });
    return records;
}

void write_scans_csv(std::ostream& out, const std::vector<ScanRecord>& records)
{
    out << "timestamp,user_a,user_b,rssi\n";
    for (const ScanRecord& rec : records)
        out << rec.timestamp << ',' << rec.user_a << ',' << rec.user_b << ',' << rec.rssi << '\n';
}

} // namespace icmi
