#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "manetsim/engine.hpp"
#include "manetsim/frame.hpp"
#include "manetsim/ledger.hpp"
#include "manetsim/mobility.hpp"
#include "manetsim/trace.hpp"

namespace manet {

/// Node positions as a function of simulated time. Queries are expected
/// to be non-decreasing in time (engine order), which keeps the segment
/// cursors O(1).
class PositionOracle {
  public:
    explicit PositionOracle(std::vector<Trajectory> trajs);
    Vec2 at(NodeId n, SimTime t) const;
    int node_count() const { return static_cast<int>(trajs_.size()); }
    const std::vector<Trajectory>& trajectories() const { return trajs_; }

  private:
    std::vector<Trajectory> trajs_;
    mutable std::vector<TrajectoryCursor> cursors_;
};

/// Abstract broadcast wireless channel.
///
/// Connectivity is range-based (boundary inclusive) and frame timing is
/// byte-accurate at the configured bandwidth. Transmissions are
/// serialized per spatial neighborhood: a node may not begin transmitting
/// while any node that shares a potential receiver with it is
/// mid-transmission, and queued transmitters are granted the channel in
/// FIFO order of their request times. Spatially disjoint neighborhoods
/// transmit concurrently. There is no frame loss other than an
/// out-of-range unicast.
class Medium {
  public:
    using DeliverFn = std::function<void(NodeId to, const Frame&, NodeId from)>;
    using UnicastFailFn = std::function<void(NodeId sender, NodeId next_hop, const Frame&)>;

    Medium(Engine& engine, const PositionOracle& positions, MetricLedger& ledger,
           TraceWriter& trace, double range, double bandwidth_bps);

    void set_handlers(DeliverFn deliver, UnicastFailFn fail);

    /// Queue a broadcast. Delivered to every node in range of the sender
    /// at transmission completion; zero receivers completes silently.
    void broadcast(NodeId sender, Frame f);

    /// Queue a unicast. If next_hop is out of range at transmission
    /// completion the sender's failure handler is invoked instead; that
    /// is the link-failure signal, not a fault.
    void unicast(NodeId sender, NodeId next_hop, Frame f);

    bool in_range(NodeId a, NodeId b) const;
    double strength(NodeId a, NodeId b) const;

    static bool in_range(Vec2 a, Vec2 b, double range) { return distance(a, b) <= range; }
    /// Normalized inverse-square strength: exactly 1 at the range
    /// boundary, > 1 inside, infinite at zero distance.
    static double strength(Vec2 a, Vec2 b, double range);

    double range() const { return range_; }
    std::uint64_t grants() const { return grants_; }

  private:
    struct Pending {
        NodeId sender;
        std::optional<NodeId> next_hop; // nullopt = broadcast
        Frame frame;
        SimTime requested;
    };
    struct Active {
        NodeId sender;
        SimTime until;
    };

    void enqueue(NodeId sender, std::optional<NodeId> next_hop, Frame f);
    void try_grants();
    void complete(Pending p);
    bool neighborhood_conflict(NodeId x, const std::vector<NodeId>& occupied, SimTime t) const;

    Engine& engine_;
    const PositionOracle& positions_;
    MetricLedger& ledger_;
    TraceWriter& trace_;
    double range_;
    double bandwidth_; // bits per second
    DeliverFn deliver_;
    UnicastFailFn fail_;
    std::deque<Pending> queue_;
    std::vector<Active> active_;
    std::uint64_t next_frame_uid_ = 1;
    std::uint64_t grants_ = 0;
};

} // namespace manet
