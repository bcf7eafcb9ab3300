#pragma once

#include <set>
#include <utility>
#include <vector>

#include "manetsim/engine.hpp"
#include "manetsim/frame.hpp"
#include "manetsim/ledger.hpp"
#include "manetsim/medium.hpp"
#include "manetsim/trace.hpp"

namespace manet {

struct ClrEvent {
    SimTime t = 0.0;
    NodeId node = 0;
    NodeId dest = 0;
};

/// Shared wiring and run-wide stats collectors handed to every router.
struct RouterContext {
    Engine* engine = nullptr;
    Medium* medium = nullptr;
    MetricLedger* ledger = nullptr;
    TraceWriter* trace = nullptr;
    FrameSizes sizes;
    double bandwidth_bps = 2e6;
    int buffer_cap = 64;
    // (src, dst) pairs of configured flows; route-creation latency is
    // sampled only for these endpoints.
    std::set<std::pair<NodeId, NodeId>> flow_pairs;
    std::vector<ClrEvent>* clr_events = nullptr;
    std::vector<double>* route_latencies = nullptr;
    std::uint64_t* loop_violations = nullptr;
};

class Router {
  public:
    virtual ~Router() = default;
    virtual void on_receive(const Frame& f, NodeId from) = 0;
    virtual void on_unicast_failed(const Frame& f, NodeId next_hop) = 0;
    virtual void on_link_up(NodeId nbr) = 0;
    virtual void on_link_down(NodeId nbr) = 0;
    /// Hand one application packet (already recorded in the ledger) to
    /// the routing layer at the source.
    virtual void send_data(const FlowSpec& flow, std::uint64_t uid) = 0;
    /// End of run: surface packets still held in buffers.
    virtual void finish() = 0;
};

} // namespace manet
