#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>

#include "manetsim/router.hpp"

namespace manet {

/// Per-destination link-reversal state machine. One instance runs per
/// destination a node has traffic or control state for: heights, per
/// neighbor last-known heights (link direction derives from the height
/// comparison), the route-required flag, and the reflection bookkeeping
/// used for partition detection.
struct ToraInstance {
    NodeId dest = 0;
    std::optional<Height> height;
    std::map<NodeId, std::optional<Height>> nbr; // current neighbors only
    bool route_required = false;
    // neighbors that echoed the reflected copy of my current reference
    // level (only meaningful while I am its origin)
    std::set<NodeId> reflections;
    std::set<std::pair<NodeId, std::uint32_t>> seen_qry;     // (origin, epoch)
    std::set<std::pair<SimTime, NodeId>> seen_clr;           // (tau, oid)
    std::map<NodeId, int> last_dir; // traced direction per neighbor: -1 down, 0 undir, +1 up
};

class ToraRouter : public Router {
  public:
    ToraRouter(NodeId me, RouterContext ctx, const std::vector<NodeId>& initial_neighbors);

    void on_receive(const Frame& f, NodeId from) override;
    void on_unicast_failed(const Frame& f, NodeId next_hop) override;
    void on_link_up(NodeId nbr) override;
    void on_link_down(NodeId nbr) override;
    void send_data(const FlowSpec& flow, std::uint64_t uid) override;
    void finish() override;

    /// Lowest-height downstream neighbor, or nullopt when no downstream
    /// link exists.
    std::optional<NodeId> next_hop(NodeId dest) const;
    std::optional<Height> height(NodeId dest) const;
    int direction(NodeId dest, NodeId nbr) const; // -1 down, 0 undirected, +1 up

    // Test scaffolding: install a pre-routed DAG without running QRY/UPD.
    ToraInstance& instance(NodeId dest) { return ensure_instance(dest); }
    void seed_height(NodeId dest, std::optional<Height> h);
    void seed_neighbor_height(NodeId dest, NodeId nbr, std::optional<Height> h);

    NodeId id() const { return me_; }

  private:
    ToraInstance& ensure_instance(NodeId dest);
    void originate_query(NodeId dest);
    void handle_qry(const QryBody& q, NodeId from);
    void handle_upd(const UpdBody& u, NodeId from);
    void handle_clr(const ClrBody& c, NodeId from);
    void handle_data(const Frame& f, NodeId from);

    void instance_link_down(ToraInstance& ti, NodeId nbr);
    void react_no_downstream(ToraInstance& ti);
    void check_partition(ToraInstance& ti);
    bool set_height(ToraInstance& ti, std::optional<Height> h);
    void refresh_dirs(ToraInstance& ti);
    int downstream_count(const ToraInstance& ti) const;
    std::optional<NodeId> pick_next_hop(const ToraInstance& ti,
                                        const std::vector<NodeId>* exclude) const;

    void broadcast_upd(ToraInstance& ti);
    void broadcast_qry(ToraInstance& ti);
    void broadcast_clr(ToraInstance& ti, SimTime tau, NodeId oid);

    void route_or_buffer(DataBody body);
    void try_drain(NodeId dest);
    void transmit_data(DataBody body, NodeId nh);
    void note_route_state(NodeId dest);

    NodeId me_;
    RouterContext ctx_;
    std::set<NodeId> neighbors_;
    std::map<NodeId, ToraInstance> instances_;
    std::map<NodeId, std::deque<DataBody>> buffer_;       // per destination
    std::map<NodeId, SimTime> discovery_t0_;              // pending latency samples
    std::uint32_t qry_epoch_ = 0;
};

} // namespace manet
