#pragma once

#include <optional>
#include <string>

#include "manetsim/ledger.hpp"

namespace manet {

struct Efficiencies {
    std::optional<double> recv; // at sink node(s), percent
    std::optional<double> send; // at source node(s), percent
    std::optional<double> fwd;  // network wide, percent
};

struct Metrics {
    double throughput_kBps = 0.0; // delivered payload bytes / duration / 1000
    double pct_delivered = 0.0;   // delivered / generated, percent, packet-weighted
    double pdf = 0.0;             // per-flow mean of R_f / N_f
    std::optional<double> avg_delay_ms;
    Efficiencies eff;
    std::uint64_t ctrl_pkts = 0;
    std::uint64_t ctrl_bytes = 0;
    std::uint64_t data_sent = 0; // generated
    std::uint64_t data_delivered = 0;
    std::uint64_t drop_source = 0;
    std::uint64_t drop_transit = 0;
};

/// Per-flow mean of received/sent. Flows that never sent are excluded
/// (and counted in *excluded_flows when given).
double pdf(const MetricLedger& ledger, int* excluded_flows = nullptr);

/// Mean of (r_i - s_i) over delivered packets, in milliseconds.
/// Not measurable (nullopt) when nothing was delivered.
std::optional<double> avg_delay_ms(const MetricLedger& ledger);

/// Application payload bytes delivered to the sink(s) per second, in
/// kilobytes (1 kB = 1000 B) per second.
double throughput_kBps(const MetricLedger& ledger, SimTime duration);

/// The three byte-efficiency ratios. A component whose denominator is
/// zero is not measurable.
Efficiencies efficiencies(const MetricLedger& ledger);

Metrics compute_metrics(const MetricLedger& ledger, SimTime duration);

struct AuditReport {
    bool ok = false;
    std::uint64_t total = 0;
    std::uint64_t delivered = 0;
    std::uint64_t drop_source = 0;
    std::uint64_t drop_transit = 0;
    std::uint64_t unaccounted = 0;
};

/// Every generated packet must land in exactly one disposition.
AuditReport conservation_audit(const MetricLedger& ledger);

struct RunEcho {
    std::string protocol;
    int nodes = 0;
    std::string speed_class;
    double pause_s = 0.0;
    std::uint64_t seed = 0;
};

struct RunResult {
    RunEcho echo;
    Metrics metrics;
    AuditReport audit;
    // extras (not part of the results CSV)
    std::optional<double> route_latency_s; // median first-request -> usable route
    std::uint64_t loop_violations = 0;
    std::uint64_t clr_count = 0;
};

extern const char* const kCsvHeader;
std::string csv_row(const RunEcho& echo, const Metrics& m);

} // namespace manet
