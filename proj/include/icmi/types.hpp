#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace icmi {

// Dense node index within a built network, [0, node_count).
using NodeId = std::int32_t;

// Simulation window index (one day, or one pseudo-day after splitting).
using Day = std::int32_t;

// Durations and timestamps are integral seconds.
using Seconds = std::int64_t;

// Invalid configuration or scenario input. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable or malformed input data. CLI maps this to exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace icmi
