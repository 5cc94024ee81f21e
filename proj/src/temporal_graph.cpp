#include "icmi/temporal_graph.hpp"

#include "icmi/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>

namespace icmi {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::int64_t parse_int_field(std::string_view field, std::size_t line_no, const char* name)
{
    field = trim(field);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw DataError("line " + std::to_string(line_no) + ": cannot parse " + name + " from '" +
                        std::string(field) + "'");
    return value;
}

} // namespace

std::vector<ScanRecord> load_interactions(std::istream& source, int rssi_threshold)
{
    std::vector<ScanRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(source, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty())
            continue;
        if (!header_seen) {
            if (text != "timestamp,user_a,user_b,rssi")
                throw DataError("line " + std::to_string(line_no) +
                                ": expected header 'timestamp,user_a,user_b,rssi'");
            header_seen = true;
            continue;
        }

        std::string_view fields[4];
        std::string_view rest = text;
        for (int f = 0; f < 4; ++f) {
            const std::size_t comma = rest.find(',');
            if (f < 3) {
                if (comma == std::string_view::npos)
                    throw DataError("line " + std::to_string(line_no) + ": expected 4 fields");
                fields[f] = rest.substr(0, comma);
                rest.remove_prefix(comma + 1);
            } else {
                if (comma != std::string_view::npos)
                    throw DataError("line " + std::to_string(line_no) + ": expected 4 fields");
                fields[f] = rest;
            }
        }

        ScanRecord rec;
        rec.timestamp = parse_int_field(fields[0], line_no, "timestamp");
        rec.user_a = parse_int_field(fields[1], line_no, "user_a");
        rec.user_b = parse_int_field(fields[2], line_no, "user_b");
        rec.rssi = static_cast<int>(parse_int_field(fields[3], line_no, "rssi"));

        if (rec.timestamp < 0)
            throw DataError("line " + std::to_string(line_no) + ": negative timestamp");
        if (rec.user_a < 0)
            throw DataError("line " + std::to_string(line_no) + ": negative user_a");

        if (rec.rssi < rssi_threshold)
            continue;
        if (rec.user_b < 0 || rec.user_a == rec.user_b) // out-of-study device or self scan
            continue;
        records.push_back(rec);
    }
    return records;
}

TemporalNetwork build_network(const std::vector<ScanRecord>& records, Seconds window_length,
                              Seconds scan_interval)
{
    if (scan_interval <= 0 || window_length <= 0 || window_length % scan_interval != 0)
        throw ConfigError("window_length must be a positive multiple of scan_interval");

    TemporalNetwork net;
    net.scan_interval = scan_interval;
    net.window_length = window_length;
    if (records.empty())
        return net;

    // Dense remap: distinct raw ids, ascending.
    std::vector<std::int64_t> ids;
    ids.reserve(records.size() * 2);
    for (const ScanRecord& r : records) {
        ids.push_back(r.user_a);
        ids.push_back(r.user_b);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::unordered_map<std::int64_t, NodeId> dense;
    dense.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        dense[ids[i]] = static_cast<NodeId>(i);
    net.original_ids = std::move(ids);
    net.node_count = static_cast<NodeId>(net.original_ids.size());

    struct Scan {
        Day window;
        NodeId a, b;
        Seconds ts;
    };
    std::vector<Scan> scans;
    scans.reserve(records.size());
    Day max_window = 0;
    for (const ScanRecord& r : records) {
        NodeId a = dense[r.user_a];
        NodeId b = dense[r.user_b];
        if (a > b)
            std::swap(a, b);
        const Day w = static_cast<Day>(r.timestamp / window_length);
        max_window = std::max(max_window, w);
        scans.push_back({w, a, b, r.timestamp});
    }
    std::sort(scans.begin(), scans.end(), [](const Scan& x, const Scan& y) {
        return std::tie(x.window, x.a, x.b, x.ts) < std::tie(y.window, y.a, y.b, y.ts);
    });

    net.snapshots.resize(static_cast<std::size_t>(max_window) + 1);
    for (Day w = 0; w <= max_window; ++w)
        net.snapshots[w].window = w;

    // Merge maximal runs of consecutive scans per (pair, window).
    std::size_t i = 0;
    while (i < scans.size()) {
        std::size_t j = i;
        while (j < scans.size() && scans[j].window == scans[i].window && scans[j].a == scans[i].a &&
               scans[j].b == scans[i].b)
            ++j;

        Snapshot& snap = net.snapshots[scans[i].window];
        std::size_t run_begin = i;
        Seconds prev_ts = scans[i].ts;
        Seconds run_scans = 1;
        for (std::size_t s = i + 1; s <= j; ++s) {
            if (s < j && scans[s].ts == prev_ts)
                continue; // duplicate scan row
            if (s < j && scans[s].ts - prev_ts <= scan_interval) {
                prev_ts = scans[s].ts;
                ++run_scans;
                continue;
            }
            Encounter e;
            e.node_i = scans[run_begin].a;
            e.node_k = scans[run_begin].b;
            e.window = scans[run_begin].window;
            e.start = scans[run_begin].ts;
            e.duration = run_scans * scan_interval;
            snap.encounters.push_back(e);
            if (s < j) {
                run_begin = s;
                prev_ts = scans[s].ts;
                run_scans = 1;
            }
        }
        i = j;
    }

    for (Snapshot& snap : net.snapshots) {
        std::vector<NodeId> active;
        active.reserve(snap.encounters.size() * 2);
        for (const Encounter& e : snap.encounters) {
            active.push_back(e.node_i);
            active.push_back(e.node_k);
        }
        std::sort(active.begin(), active.end());
        active.erase(std::unique(active.begin(), active.end()), active.end());
        snap.active_nodes = std::move(active);
    }
    return net;
}

namespace {

// Union-find over the nodes touched by one scan slot.
struct SlotComponents {
    std::unordered_map<NodeId, NodeId> parent;

    NodeId find(NodeId x)
    {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return x;
        }
        while (it->second != x) {
            x = it->second;
            it = parent.find(x);
        }
        return x;
    }

    void unite(NodeId a, NodeId b)
    {
        const NodeId ra = find(a);
        const NodeId rb = find(b);
        if (ra != rb)
            parent[std::max(ra, rb)] = std::min(ra, rb);
    }
};

} // namespace

std::vector<Gathering> detect_gatherings(Snapshot& snapshot, Seconds scan_interval,
                                         Seconds window_length)
{
    snapshot.gatherings.clear();
    for (Encounter& e : snapshot.encounters)
        e.in_gathering = false;
    if (snapshot.encounters.size() < 3)
        return snapshot.gatherings;

    const Seconds window_start = static_cast<Seconds>(snapshot.window) * window_length;
    const auto slot_of = [&](Seconds t) { return (t - window_start) / scan_interval; };
    const Seconds n_slots = window_length / scan_interval;

    // Encounter activity intervals in slot units, clamped to the window.
    struct Interval {
        Seconds first_slot, last_slot;
        std::size_t encounter;
    };
    std::vector<Interval> intervals;
    intervals.reserve(snapshot.encounters.size());
    for (std::size_t idx = 0; idx < snapshot.encounters.size(); ++idx) {
        const Encounter& e = snapshot.encounters[idx];
        const Seconds first = std::clamp<Seconds>(slot_of(e.start), 0, n_slots - 1);
        const Seconds last = std::clamp<Seconds>(slot_of(e.start + e.duration - 1), 0, n_slots - 1);
        intervals.push_back({first, last, idx});
    }
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
        return std::tie(a.first_slot, a.encounter) < std::tie(b.first_slot, b.encounter);
    });

    std::vector<Gathering> result;
    // Open gatherings from the previous slot, keyed by member set.
    std::map<std::vector<NodeId>, std::size_t> open;

    std::vector<std::size_t> active; // indices into intervals
    std::size_t next_interval = 0;
    for (Seconds slot = 0; slot < n_slots; ++slot) {
        while (next_interval < intervals.size() && intervals[next_interval].first_slot == slot)
            active.push_back(next_interval++);
        std::erase_if(active, [&](std::size_t ii) { return intervals[ii].last_slot < slot; });
        if (active.empty()) {
            if (next_interval >= intervals.size() && open.empty())
                break;
            open.clear();
            continue;
        }

        SlotComponents uf;
        for (std::size_t ii : active) {
            const Encounter& e = snapshot.encounters[intervals[ii].encounter];
            uf.unite(e.node_i, e.node_k);
        }
        std::unordered_map<NodeId, std::vector<NodeId>> members_of;
        for (const auto& [node, _] : uf.parent)
            members_of[uf.find(node)].push_back(node);

        for (std::size_t ii : active) {
            Encounter& e = snapshot.encounters[intervals[ii].encounter];
            if (e.in_gathering)
                continue;
            const auto mo = members_of.find(uf.find(e.node_i));
            if (mo != members_of.end() && mo->second.size() >= 3)
                e.in_gathering = true;
        }

        std::map<std::vector<NodeId>, std::size_t> still_open;
        std::vector<std::vector<NodeId>> slot_sets;
        for (auto& [root, members] : members_of) {
            if (members.size() < 3)
                continue;
            std::sort(members.begin(), members.end());
            slot_sets.push_back(std::move(members));
        }
        std::sort(slot_sets.begin(), slot_sets.end());

        for (std::vector<NodeId>& members : slot_sets) {
            const auto prev = open.find(members);
            if (prev != open.end()) {
                result[prev->second].duration += scan_interval;
                still_open[members] = prev->second;
            } else {
                Gathering g;
                g.members = members;
                g.duration = scan_interval;
                g.window = snapshot.window;
                g.start = window_start + slot * scan_interval;
                result.push_back(std::move(g));
                still_open[members] = result.size() - 1;
            }
        }
        open = std::move(still_open);
    }

    std::sort(result.begin(), result.end(), [](const Gathering& a, const Gathering& b) {
        return std::tie(a.start, a.members) < std::tie(b.start, b.members);
    });
    snapshot.gatherings = result;
    return result;
}

void detect_gatherings(TemporalNetwork& network)
{
    for (Snapshot& snap : network.snapshots)
        detect_gatherings(snap, network.scan_interval, network.window_length);
}

TemporalNetwork split_density(const TemporalNetwork& network, int k, std::uint64_t seed)
{
    if (k < 1)
        throw ConfigError("split_density: k must be >= 1");
    if (k == 1)
        return network;

    TemporalNetwork out;
    out.node_count = network.node_count;
    out.scan_interval = network.scan_interval;
    out.window_length = network.window_length;
    out.original_ids = network.original_ids;
    out.snapshots.resize(network.snapshots.size() * static_cast<std::size_t>(k));

    for (std::size_t w = 0; w < network.snapshots.size(); ++w) {
        const Snapshot& src = network.snapshots[w];
        Rng rng = make_rng(derive_stream(seed, w));

        std::vector<std::size_t> order(src.encounters.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);

        const std::size_t m = order.size();
        const std::size_t base = m / static_cast<std::size_t>(k);
        const std::size_t extra = m % static_cast<std::size_t>(k);

        std::size_t cursor = 0;
        for (int j = 0; j < k; ++j) {
            const Day new_window = static_cast<Day>(w) * k + j;
            Snapshot& dst = out.snapshots[new_window];
            dst.window = new_window;
            const std::size_t take = base + (static_cast<std::size_t>(j) < extra ? 1 : 0);
            dst.encounters.reserve(take);
            for (std::size_t t = 0; t < take; ++t, ++cursor) {
                Encounter e = src.encounters[order[cursor]];
                e.window = new_window;
                e.in_gathering = false; // slot structure is gone; pairwise-only
                dst.encounters.push_back(e);
            }
            std::vector<NodeId> active;
            active.reserve(dst.encounters.size() * 2);
            for (const Encounter& e : dst.encounters) {
                active.push_back(e.node_i);
                active.push_back(e.node_k);
            }
            std::sort(active.begin(), active.end());
            active.erase(std::unique(active.begin(), active.end()), active.end());
            dst.active_nodes = std::move(active);
        }
    }
    return out;
}

double temporal_density(const Snapshot& snapshot, NodeId node_count)
{
    if (node_count < 2)
        throw ConfigError("temporal_density: node_count must be >= 2");
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(snapshot.encounters.size());
    for (const Encounter& e : snapshot.encounters)
        pairs.emplace_back(e.node_i, e.node_k);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    const double possible = 0.5 * static_cast<double>(node_count) * (static_cast<double>(node_count) - 1.0);
    return static_cast<double>(pairs.size()) / possible;
}

std::vector<DurationHistogramBin> duration_histogram(const TemporalNetwork& network, int log_bins)
{
    std::vector<DurationHistogramBin> bins;
    if (network.snapshots.empty() || log_bins <= 0)
        return bins;

    Seconds lo = 0, hi = 0;
    std::size_t total = 0;
    for (const Snapshot& snap : network.snapshots) {
        for (const Encounter& e : snap.encounters) {
            if (total == 0) {
                lo = hi = e.duration;
            } else {
                lo = std::min(lo, e.duration);
                hi = std::max(hi, e.duration);
            }
            ++total;
        }
    }
    if (total == 0)
        return bins;

    const double days = static_cast<double>(network.snapshots.size());
    if (lo == hi) {
        bins.push_back({static_cast<double>(lo), static_cast<double>(hi),
                        static_cast<double>(total) / days});
        return bins;
    }

    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi));
    const double step = (log_hi - log_lo) / log_bins;
    bins.resize(static_cast<std::size_t>(log_bins));
    for (int b = 0; b < log_bins; ++b) {
        bins[b].low_s = std::exp(log_lo + b * step);
        bins[b].high_s = std::exp(log_lo + (b + 1) * step);
    }
    bins.front().low_s = static_cast<double>(lo);
    bins.back().high_s = static_cast<double>(hi);

    for (const Snapshot& snap : network.snapshots) {
        for (const Encounter& e : snap.encounters) {
            int b = static_cast<int>((std::log(static_cast<double>(e.duration)) - log_lo) / step);
            b = std::clamp(b, 0, log_bins - 1);
            bins[b].avg_daily_count += 1.0;
        }
    }
    for (DurationHistogramBin& bin : bins)
        bin.avg_daily_count /= days;
    return bins;
}

} // namespace icmi
