#pragma once

#include <string>

#include "manetsim/metrics.hpp"

namespace manet {

/// Rebuild the metric ledger from a recorded trace and recompute the
/// results row. Bit-identical to the CSV row the original run produced.
struct ReplayResult {
    RunEcho echo;
    Metrics metrics;
};

ReplayResult replay_trace(const std::string& trace_text);
ReplayResult replay_trace_file(const std::string& path);

} // namespace manet
