#pragma once

#include "icmi/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace icmi {

// One proximity scan row as ingested. user ids are the raw dataset ids;
// negative user_b marks an out-of-study device.
struct ScanRecord {
    Seconds timestamp = 0;
    std::int64_t user_a = 0;
    std::int64_t user_b = 0;
    int rssi = 0;
};

// A pairwise contact merged from consecutive scans. Undirected, stored with
// node_i < node_k. start is the timestamp of the first scan of the run;
// duration is always a positive multiple of the network's scan interval.
// in_gathering marks encounters that overlap a detected gathering slot; the
// contagion layer applies the gathering rule to those instead of the
// pairwise edge, so the exposure is not double-counted.
struct Encounter {
    NodeId node_i = 0;
    NodeId node_k = 0;
    Seconds duration = 0;
    Day window = 0;
    Seconds start = 0;
    bool in_gathering = false;
};

// Simultaneous co-presence of three or more people, from per-slot connected
// components of the contact graph.
struct Gathering {
    std::vector<NodeId> members; // sorted, size >= 3
    Seconds duration = 0;
    Day window = 0;
    Seconds start = 0;
};

// One temporal window (a day, or a pseudo-day after density splitting).
struct Snapshot {
    Day window = 0;
    std::vector<Encounter> encounters;
    std::vector<Gathering> gatherings;
    std::vector<NodeId> active_nodes; // sorted
};

// The full interaction sequence. Node ids are dense integers [0, node_count);
// original_ids maps them back to the raw dataset ids.
struct TemporalNetwork {
    std::vector<Snapshot> snapshots;
    NodeId node_count = 0;
    Seconds scan_interval = 300;
    Seconds window_length = 86400;
    std::vector<std::int64_t> original_ids;

    Day days() const { return static_cast<Day>(snapshots.size()); }
};

// Reads CNS-format CSV (header `timestamp,user_a,user_b,rssi`) and keeps
// rows with rssi >= rssi_threshold and both endpoints in-study. Rows that
// fail to parse raise DataError naming the line; rows with an out-of-study
// or self endpoint are dropped silently. Input order is preserved.
std::vector<ScanRecord> load_interactions(std::istream& source, int rssi_threshold);

// Bins records into windows of window_length and merges, per pair per
// window, maximal runs of scans no further than scan_interval apart into one
// encounter of duration run_length * scan_interval. Deterministic in the
// record multiset. window_length must be a positive multiple of scan_interval.
TemporalNetwork build_network(const std::vector<ScanRecord>& records, Seconds window_length,
                              Seconds scan_interval);

// Per scan slot, connected components of the co-occurring contact graph with
// >= 3 members become gatherings; consecutive slots with an identical member
// set merge into one gathering with summed duration. Flags the pairwise
// encounters involved and stores the result in snapshot.gatherings.
std::vector<Gathering> detect_gatherings(Snapshot& snapshot, Seconds scan_interval,
                                         Seconds window_length);

// Runs detect_gatherings over every snapshot.
void detect_gatherings(TemporalNetwork& network);

// Splits every day into k pseudo-days, partitioning its encounters uniformly
// at random (seeded) into parts of near-equal size. The encounter multiset is
// preserved and the output has k * days() windows. k >= 2 discards gathering
// annotations: the partition destroys the intra-day slot structure they were
// detected on, so split networks are pairwise-only. k == 1 is the identity.
TemporalNetwork split_density(const TemporalNetwork& network, int k, std::uint64_t seed);

// Fraction of realized pairs: distinct interacting pairs / (n*(n-1)/2).
double temporal_density(const Snapshot& snapshot, NodeId node_count);

struct DurationHistogramBin {
    double low_s = 0.0;
    double high_s = 0.0;
    double avg_daily_count = 0.0;
};

// Histogram of meeting durations over log-scaled bins, counts averaged over
// the number of windows in the network.
std::vector<DurationHistogramBin> duration_histogram(const TemporalNetwork& network, int log_bins);

} // namespace icmi
