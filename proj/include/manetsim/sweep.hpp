#pragma once

#include <string>
#include <vector>

#include "manetsim/scenario.hpp"
#include "manetsim/sim.hpp"

namespace manet {

/// Parameter grid swept over a base scenario. Every (protocol, nodes,
/// speed, pause, seed) point is one isolated run; points execute on
/// OpenMP threads and the output is identical for any thread count.
struct SweepSpec {
    std::vector<std::string> protocols; // empty: the base scenario's protocol
    std::vector<int> nodes;             // empty: base nodes
    std::vector<std::string> speeds;    // "slow" / "fast"; empty: base range
    std::vector<double> pauses;         // empty: base pause
    std::vector<std::uint64_t> seeds;   // must be non-empty
    int jobs = 0;                       // 0 = OpenMP default
};

struct SweepOutcome {
    int rows = 0;
    int failures = 0;
    std::vector<RunResult> results;
};

/// Runs the grid and writes results.csv, aggregate.csv, failures.csv and
/// per-metric plot tables (x = pause, one series per protocol) to out_dir.
SweepOutcome run_sweep(const Scenario& base, const SweepSpec& spec, const std::string& out_dir);

} // namespace manet
