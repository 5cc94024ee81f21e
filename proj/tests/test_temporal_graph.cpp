#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "icmi/rng.hpp"
#include "icmi/synth.hpp"
#include "icmi/temporal_graph.hpp"

using namespace icmi;

namespace {

std::vector<ScanRecord> parse(const std::string& csv, int rssi_threshold = -90)
{
    std::istringstream in(csv);
    return load_interactions(in, rssi_threshold);
}

// Independent encounter reconstruction: per (window, pair), sort deduplicated
// scan times and cut runs wherever the gap exceeds the scan interval.
std::map<std::tuple<Seconds, std::int64_t, std::int64_t>, std::vector<Seconds>>
oracle_encounters(const std::vector<ScanRecord>& records, Seconds window_length,
                  Seconds scan_interval)
{
    std::map<std::tuple<Seconds, std::int64_t, std::int64_t>, std::set<Seconds>> scans;
    for (const ScanRecord& r : records) {
        const auto a = std::min(r.user_a, r.user_b);
        const auto b = std::max(r.user_a, r.user_b);
        scans[{r.timestamp / window_length, a, b}].insert(r.timestamp);
    }
    std::map<std::tuple<Seconds, std::int64_t, std::int64_t>, std::vector<Seconds>> durations;
    for (const auto& [key, times] : scans) {
        Seconds run = 0, prev = -1;
        for (Seconds t : times) {
            if (run > 0 && t - prev <= scan_interval) {
                ++run;
            } else {
                if (run > 0)
                    durations[key].push_back(run * scan_interval);
                run = 1;
            }
            prev = t;
        }
        durations[key].push_back(run * scan_interval);
    }
    return durations;
}

} // namespace

TEST_SUITE("temporal_graph") {

TEST_CASE("loader keeps good rows and drops filtered ones")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "0,1,2,-60\n"
                            "300,2,1,-89\n"   // kept: at threshold boundary? -89 >= -90
                            "600,1,2,-91\n"   // dropped: weak signal
                            "900,3,-1,-50\n"  // dropped: out-of-study device
                            "1200,4,4,-50\n"  // dropped: self scan
                            "1500,5,6,-90\n"; // kept: exactly at threshold
    const std::vector<ScanRecord> records = parse(csv);
    REQUIRE(records.size() == 3);
    CHECK(records[0].timestamp == 0);
    CHECK(records[1].user_a == 2);
    CHECK(records[2].rssi == -90);
}

TEST_CASE("loader rejects malformed input with the line number")
{
    CHECK_THROWS_WITH_AS(parse("time,user\n"), doctest::Contains("line 1"), DataError);
    CHECK_THROWS_WITH_AS(parse("timestamp,user_a,user_b,rssi\n0,1,2\n"),
                         doctest::Contains("line 2"), DataError);
    CHECK_THROWS_WITH_AS(parse("timestamp,user_a,user_b,rssi\nabc,1,2,-60\n"),
                         doctest::Contains("line 2"), DataError);
    CHECK_THROWS_AS(parse("timestamp,user_a,user_b,rssi\n-5,1,2,-60\n"), DataError);
    CHECK_THROWS_AS(parse("timestamp,user_a,user_b,rssi\n5,-1,2,-60\n"), DataError);
}

TEST_CASE("loader accepts empty input")
{
    CHECK(parse("").empty());
    CHECK(parse("timestamp,user_a,user_b,rssi\n").empty());
}

TEST_CASE("consecutive scans merge into one encounter")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "0,1,2,-60\n"
                            "300,1,2,-60\n"
                            "600,2,1,-60\n" // unordered pair, same meeting
                            "600,1,2,-60\n" // duplicate scan, ignored
                            "1800,1,2,-60\n"; // gap 1200 > 300: new meeting
    const TemporalNetwork net = build_network(parse(csv), 86400, 300);
    REQUIRE(net.days() == 1);
    REQUIRE(net.snapshots[0].encounters.size() == 2);
    CHECK(net.snapshots[0].encounters[0].duration == 900);
    CHECK(net.snapshots[0].encounters[0].start == 0);
    CHECK(net.snapshots[0].encounters[1].duration == 300);
    CHECK(net.snapshots[0].encounters[1].start == 1800);
    CHECK(net.node_count == 2);
}

TEST_CASE("runs do not merge across the window boundary")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "86100,1,2,-60\n"
                            "86400,1,2,-60\n"; // next day, despite the 300 s gap
    const TemporalNetwork net = build_network(parse(csv), 86400, 300);
    REQUIRE(net.days() == 2);
    CHECK(net.snapshots[0].encounters.size() == 1);
    CHECK(net.snapshots[1].encounters.size() == 1);
}

TEST_CASE("node ids are remapped densely and windows materialized")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "172800,10,20,-60\n"; // only day 2 has data
    const TemporalNetwork net = build_network(parse(csv), 86400, 300);
    REQUIRE(net.days() == 3);
    CHECK(net.snapshots[0].encounters.empty());
    CHECK(net.snapshots[0].active_nodes.empty());
    CHECK(net.node_count == 2);
    REQUIRE(net.original_ids.size() == 2);
    CHECK(net.original_ids[0] == 10);
    CHECK(net.original_ids[1] == 20);
    CHECK(net.snapshots[2].active_nodes == std::vector<NodeId>{0, 1});
}

TEST_CASE("encounter reconstruction agrees with a brute-force oracle")
{
    Rng rng = make_rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        // Random scan soup over few nodes and two days.
        std::vector<ScanRecord> records;
        const int n = 2 + static_cast<int>(uniform_below(rng, 5));
        const int scans = 50 + static_cast<int>(uniform_below(rng, 150));
        for (int i = 0; i < scans; ++i) {
            ScanRecord r;
            r.user_a = static_cast<std::int64_t>(uniform_below(rng, n));
            do {
                r.user_b = static_cast<std::int64_t>(uniform_below(rng, n));
            } while (r.user_b == r.user_a);
            r.timestamp = static_cast<Seconds>(uniform_below(rng, 2 * 24)) * 3600; // hour grid
            r.rssi = -60;
            records.push_back(r);
        }

        const TemporalNetwork net = build_network(records, 86400, 3600);
        const auto oracle = oracle_encounters(records, 86400, 3600);

        std::map<std::tuple<Seconds, std::int64_t, std::int64_t>, std::vector<Seconds>> got;
        for (const Snapshot& snap : net.snapshots)
            for (const Encounter& e : snap.encounters)
                got[{snap.window, net.original_ids[static_cast<std::size_t>(e.node_i)],
                     net.original_ids[static_cast<std::size_t>(e.node_k)]}]
                    .push_back(e.duration);
        for (auto& [key, durs] : got)
            std::sort(durs.begin(), durs.end());

        auto want = oracle;
        for (auto& [key, durs] : want)
            std::sort(durs.begin(), durs.end());
        CHECK(got == want);
    }
}

TEST_CASE("a co-present trio forms a gathering, a lone pair does not")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "0,1,2,-60\n"
                            "0,2,3,-60\n" // chain 1-2-3: one component of 3
                            "0,4,5,-60\n"; // separate pair: no gathering
    TemporalNetwork net = build_network(parse(csv), 86400, 300);
    detect_gatherings(net);
    REQUIRE(net.snapshots[0].gatherings.size() == 1);
    const Gathering& g = net.snapshots[0].gatherings[0];
    CHECK(g.members == std::vector<NodeId>{0, 1, 2});
    CHECK(g.duration == 300);
    CHECK(g.start == 0);

    int flagged = 0;
    for (const Encounter& e : net.snapshots[0].encounters)
        flagged += e.in_gathering ? 1 : 0;
    CHECK(flagged == 2); // both trio edges, not the lone pair
}

TEST_CASE("a stable member set merges across consecutive slots")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "0,1,2,-60\n0,2,3,-60\n"
                            "300,1,2,-60\n300,2,3,-60\n" // same trio, next slot
                            "900,1,2,-60\n900,2,3,-60\n"; // gap: separate event
    TemporalNetwork net = build_network(parse(csv), 86400, 300);
    detect_gatherings(net);
    REQUIRE(net.snapshots[0].gatherings.size() == 2);
    CHECK(net.snapshots[0].gatherings[0].duration == 600);
    CHECK(net.snapshots[0].gatherings[0].start == 0);
    CHECK(net.snapshots[0].gatherings[1].duration == 300);
    CHECK(net.snapshots[0].gatherings[1].start == 900);
}

TEST_CASE("membership change closes the running gathering")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "0,1,2,-60\n0,2,3,-60\n"
                            "300,1,2,-60\n300,2,3,-60\n300,3,4,-60\n"; // grows to 4
    TemporalNetwork net = build_network(parse(csv), 86400, 300);
    detect_gatherings(net);
    REQUIRE(net.snapshots[0].gatherings.size() == 2);
    CHECK(net.snapshots[0].gatherings[0].members.size() == 3);
    CHECK(net.snapshots[0].gatherings[0].duration == 300);
    CHECK(net.snapshots[0].gatherings[1].members.size() == 4);
}

TEST_CASE("gathering detection agrees with a per-slot component oracle")
{
    Rng rng = make_rng(321);
    for (int trial = 0; trial < 20; ++trial) {
        SynthParams sp;
        sp.nodes = 12;
        sp.days = 1;
        sp.scan_interval = 300;
        sp.window_length = 7200; // 24 slots keeps the oracle cheap
        sp.meetings_per_node_day = 5.0;
        sp.single_scan_fraction = 0.5;
        sp.max_run_scans = 6;
        sp.gatherings_per_day = 3.0;
        sp.seed = 1000 + static_cast<std::uint64_t>(trial);
        TemporalNetwork net = build_network(synth_scans(sp), sp.window_length, sp.scan_interval);
        detect_gatherings(net);

        const Snapshot& snap = net.snapshots[0];
        // Oracle: BFS components per slot, then merge identical consecutive sets.
        const Seconds slots = sp.window_length / sp.scan_interval;
        std::vector<std::tuple<Seconds, std::vector<NodeId>, Seconds>> finished; // start,mem,dur
        std::map<std::vector<NodeId>, Seconds> still; // members -> start slot
        for (Seconds slot = 0; slot <= slots; ++slot) {
            std::set<std::vector<NodeId>> here;
            if (slot < slots) {
                std::map<NodeId, std::vector<NodeId>> adj;
                for (const Encounter& e : snap.encounters) {
                    const Seconds first = e.start / sp.scan_interval;
                    const Seconds last = first + e.duration / sp.scan_interval - 1;
                    if (slot >= first && slot <= last) {
                        adj[e.node_i].push_back(e.node_k);
                        adj[e.node_k].push_back(e.node_i);
                    }
                }
                std::set<NodeId> seen;
                for (const auto& [node, nbrs] : adj) {
                    if (seen.count(node))
                        continue;
                    std::vector<NodeId> comp{node};
                    seen.insert(node);
                    for (std::size_t i = 0; i < comp.size(); ++i)
                        for (NodeId nb : adj[comp[i]])
                            if (!seen.count(nb)) {
                                seen.insert(nb);
                                comp.push_back(nb);
                            }
                    if (comp.size() >= 3) {
                        std::sort(comp.begin(), comp.end());
                        here.insert(comp);
                    }
                }
            }
            std::map<std::vector<NodeId>, Seconds> next;
            for (const auto& members : here) {
                const auto it = still.find(members);
                next[members] = it != still.end() ? it->second : slot;
            }
            for (const auto& [members, start_slot] : still)
                if (!next.count(members))
                    finished.emplace_back(start_slot * sp.scan_interval, members,
                                          (slot - start_slot) * sp.scan_interval);
            still = std::move(next);
        }
        std::sort(finished.begin(), finished.end());

        REQUIRE(snap.gatherings.size() == finished.size());
        for (std::size_t i = 0; i < finished.size(); ++i) {
            CHECK(snap.gatherings[i].start == std::get<0>(finished[i]));
            CHECK(snap.gatherings[i].members == std::get<1>(finished[i]));
            CHECK(snap.gatherings[i].duration == std::get<2>(finished[i]));
        }
    }
}

TEST_CASE("density is the realized fraction of pairs")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "0,0,1,-60\n"
                            "0,1,2,-60\n"
                            "3000,1,2,-60\n" // same pair again: still one pair
                            "86400,3,4,-60\n";
    const TemporalNetwork net = build_network(parse(csv), 86400, 300);
    REQUIRE(net.node_count == 5);
    CHECK(temporal_density(net.snapshots[0], net.node_count) == doctest::Approx(2.0 / 10.0));
    CHECK(temporal_density(net.snapshots[1], net.node_count) == doctest::Approx(1.0 / 10.0));
    CHECK_THROWS_AS(temporal_density(net.snapshots[0], 1), ConfigError);
}

TEST_CASE("splitting preserves encounters and multiplies windows")
{
    SynthParams sp;
    sp.nodes = 30;
    sp.days = 4;
    sp.scan_interval = 300;
    sp.meetings_per_node_day = 4.0;
    sp.seed = 5;
    const TemporalNetwork net = build_network(synth_scans(sp), 86400, 300);

    const TemporalNetwork split = split_density(net, 3, 42);
    CHECK(split.days() == 12);
    CHECK(split.node_count == net.node_count);

    // The encounter multiset per original day is preserved.
    for (Day day = 0; day < net.days(); ++day) {
        std::multiset<std::tuple<NodeId, NodeId, Seconds>> before, after;
        for (const Encounter& e : net.snapshots[static_cast<std::size_t>(day)].encounters)
            before.insert({e.node_i, e.node_k, e.duration});
        std::size_t part_min = SIZE_MAX, part_max = 0;
        for (int j = 0; j < 3; ++j) {
            const Snapshot& snap = split.snapshots[static_cast<std::size_t>(day * 3 + j)];
            part_min = std::min(part_min, snap.encounters.size());
            part_max = std::max(part_max, snap.encounters.size());
            for (const Encounter& e : snap.encounters)
                after.insert({e.node_i, e.node_k, e.duration});
        }
        CHECK(before == after);
        CHECK(part_max - part_min <= 1); // near-equal parts
    }

    // Density goes down on average.
    double orig = 0.0, thinned = 0.0;
    for (const Snapshot& s : net.snapshots)
        orig += temporal_density(s, net.node_count);
    orig /= static_cast<double>(net.days());
    for (const Snapshot& s : split.snapshots)
        thinned += temporal_density(s, split.node_count);
    thinned /= static_cast<double>(split.days());
    CHECK(thinned < orig);

    // Seeded: same seed, same partition; identity at k = 1.
    const TemporalNetwork again = split_density(net, 3, 42);
    for (std::size_t w = 0; w < split.snapshots.size(); ++w)
        CHECK(split.snapshots[w].encounters.size() == again.snapshots[w].encounters.size());
    const TemporalNetwork same = split_density(net, 1, 42);
    CHECK(same.days() == net.days());
    for (std::size_t w = 0; w < same.snapshots.size(); ++w)
        CHECK(same.snapshots[w].encounters.size() == net.snapshots[w].encounters.size());

    CHECK_THROWS_AS(split_density(net, 0, 1), ConfigError);
}

TEST_CASE("split networks carry no gathering annotations")
{
    SynthParams sp;
    sp.nodes = 20;
    sp.days = 2;
    sp.gatherings_per_day = 3.0;
    sp.seed = 9;
    TemporalNetwork net = build_network(synth_scans(sp), 86400, 30);
    detect_gatherings(net);

    const TemporalNetwork split = split_density(net, 2, 7);
    for (const Snapshot& snap : split.snapshots) {
        CHECK(snap.gatherings.empty());
        for (const Encounter& e : snap.encounters)
            CHECK_FALSE(e.in_gathering);
    }
}

TEST_CASE("duration histogram averages per-day counts over log bins")
{
    const std::string csv = "timestamp,user_a,user_b,rssi\n"
                            "0,1,2,-60\n"           // 300 s
                            "0,1,3,-60\n300,1,3,-60\n" // 600 s
                            "86400,2,3,-60\n";      // 300 s, day 2
    const TemporalNetwork net = build_network(parse(csv), 86400, 300);
    const auto bins = duration_histogram(net, 2);
    REQUIRE(bins.size() == 2);
    CHECK(bins.front().low_s == doctest::Approx(300.0));
    CHECK(bins.back().high_s == doctest::Approx(600.0));
    CHECK(bins[0].avg_daily_count == doctest::Approx(1.0));  // two 300 s over two days
    CHECK(bins[1].avg_daily_count == doctest::Approx(0.5));  // one 600 s over two days
}

TEST_CASE("short meetings dominate a scan-grid dataset's histogram")
{
    SynthParams sp;
    sp.nodes = 60;
    sp.days = 6;
    sp.scan_interval = 30;
    sp.meetings_per_node_day = 4.0;
    sp.single_scan_fraction = 0.85;
    sp.max_run_scans = 40;
    sp.seed = 17;
    const TemporalNetwork net = build_network(synth_scans(sp), 86400, 30);
    const auto bins = duration_histogram(net, 10);
    REQUIRE(!bins.empty());
    const auto max_bin = std::max_element(
        bins.begin(), bins.end(), [](const DurationHistogramBin& a, const DurationHistogramBin& b) {
            return a.avg_daily_count < b.avg_daily_count;
        });
    CHECK(max_bin == bins.begin()); // right-skewed: the shortest bin is the mode
}

} // TEST_SUITE
