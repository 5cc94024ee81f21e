#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "icmi/temporal_graph.hpp"

namespace icmi {

// Seeded generator of proximity-scan logs shaped like Bluetooth study
// exports: mostly one-scan meetings, a tail of long runs, occasional
// group co-presence, plus (optionally) records the loader is supposed to
// reject. Used for the bundled sample dataset and the test corpora.
struct SynthParams {
    int nodes = 700;
    int days = 28;
    Seconds scan_interval = 30;
    Seconds window_length = 86400;
    double meetings_per_node_day = 3.0; // density knob: pair meetings/day = nodes*this/2
    double single_scan_fraction = 0.8;  // share of meetings lasting exactly one scan
    int max_run_scans = 40;             // longest meeting, in scans
    double gatherings_per_day = 0.0;    // group events (3..6 members) per day
    int rssi = -60;
    bool noise = false; // sprinkle below-threshold and out-of-study records
    std::uint64_t seed = 42;
};

std::vector<ScanRecord> synth_scans(const SynthParams& params);

// `timestamp,user_a,user_b,rssi`, the loader's input format.
void write_scans_csv(std::ostream& out, const std::vector<ScanRecord>& records);

} // namespace icmi
