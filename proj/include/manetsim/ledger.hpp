#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "manetsim/engine.hpp"
#include "manetsim/frame.hpp"

namespace manet {

enum class Disposition { kPending, kDelivered, kDroppedSource, kDroppedTransit };

struct FlowSpec {
    int id = 0;
    NodeId src = 1;
    NodeId dst = 0;
    std::uint32_t payload = 512;
    double interval = 0.25;
    SimTime start = 0.0;
    SimTime stop = 200.0;
};

/// One application data packet, from generation to its final fate.
struct PacketRecord {
    std::uint64_t uid = 0;
    int flow_id = 0;
    NodeId src = 0;
    NodeId dst = 0;
    std::uint32_t payload = 0;
    SimTime sent_at = 0.0;                 // s_i
    std::optional<SimTime> delivered_at;   // r_i (first application delivery)
    bool departed = false;                 // ever left the source successfully
    Disposition disposition = Disposition::kPending;
};

struct NodeCounters {
    std::uint64_t data_bytes_rx = 0;
    std::uint64_t ctrl_bytes_rx = 0;
    std::uint64_t data_bytes_tx_orig = 0; // successful, frame.src == node
    std::uint64_t data_bytes_tx_fwd = 0;  // successful, frame.src != node
    std::uint64_t ctrl_bytes_tx_orig = 0;
    std::uint64_t ctrl_bytes_tx_fwd = 0;
};

struct KindCounters {
    std::uint64_t pkts = 0;
    std::uint64_t bytes = 0;
};

/// Byte/packet bookkeeping every metric derives from. Mutated only by
/// engine-dispatched events; a post-run pure pass turns it into metrics.
class MetricLedger {
  public:
    void set_node_count(int n) { nodes_.assign(static_cast<std::size_t>(n), NodeCounters{}); }
    void add_flow(const FlowSpec& f) { flows_.push_back(f); }

    void on_generated(std::uint64_t uid, int flow_id, NodeId src, NodeId dst,
                      std::uint32_t payload, SimTime t);
    /// A transmission completed. `success` is false for a unicast whose
    /// next hop was out of range at completion and for a broadcast nobody
    /// received; only successful bytes count toward the efficiency sums.
    void on_tx(NodeId node, const Frame& f, bool success);
    void on_rx(NodeId node, const Frame& f);
    void on_departed(std::uint64_t uid);
    void on_delivered(std::uint64_t uid, SimTime t); // dedupes by uid
    /// Resolve the disposition of every record that is still pending.
    void finalize();

    const std::vector<FlowSpec>& flows() const { return flows_; }
    const std::map<std::uint64_t, PacketRecord>& records() const { return records_; }
    const std::vector<NodeCounters>& node_counters() const { return nodes_; }
    const std::map<FrameKind, KindCounters>& tx_by_kind() const { return tx_by_kind_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }

  private:
    std::vector<FlowSpec> flows_;
    std::map<std::uint64_t, PacketRecord> records_;
    std::vector<NodeCounters> nodes_;
    std::map<FrameKind, KindCounters> tx_by_kind_; // successful only
};

} // namespace manet
