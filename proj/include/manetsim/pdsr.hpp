#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>

#include "manetsim/router.hpp"

namespace manet {

/// Ordered node ids from source toward destination, both included.
using RouteRecord = std::vector<NodeId>;

std::string route_str(const RouteRecord& r);

/// Destination-side route selection over the RREQ records collected in one
/// quantum-q window: primary = fewest hops, backup = maximum
/// intermediate-node disjointness from the primary, then fewest hops, then
/// lexicographic. Pure; exposed for direct testing.
struct RouteChoice {
    RouteRecord primary;
    RouteRecord backup; // empty when only one candidate arrived
};
RouteChoice choose_routes(const std::vector<RouteRecord>& candidates);

/// Signal-strength monitor with hysteresis: fires once when strength
/// crosses from >= T to < T and re-arms only after recovering above
/// kRearmFactor * T.
class SignalMonitor {
  public:
    explicit SignalMonitor(double threshold) : threshold_(threshold) {}
    /// Returns true when this sample should raise a warning.
    bool sample(double strength);
    bool armed() const { return armed_; }
    static constexpr double kRearmFactor = 1.1;

  private:
    double threshold_;
    bool armed_ = true;
};

struct PdsrParams {
    double q = 0.1;              // destination collection quantum, seconds
    double threshold = 1.5;      // normalized signal-strength threshold T
    double ack_timeout_factor = 3.0;
    bool dsr_baseline = false;   // q = 0, no backup, no monitoring
    // route discovery retry schedule
    double backoff_initial = 0.5;
    double backoff_cap = 8.0;
    int max_tries = 10;
    double probe_interval = 0.2; // monitor probe period
    double monitor_lease = 1.0;  // drop a monitor this long after its last data
    double ack_timeout_floor = 0.05;
};

/// DSR source routing with the preemptive extension: dual-route discovery
/// at the destination, signal monitoring along active routes, warning
/// driven duplication onto the backup, ack-gated switchover, and cache
/// based salvage of stranded data.
class PdsrRouter : public Router {
  public:
    PdsrRouter(NodeId me, RouterContext ctx, PdsrParams params);

    void on_receive(const Frame& f, NodeId from) override;
    void on_unicast_failed(const Frame& f, NodeId next_hop) override;
    // DSR-family nodes learn about links only from their own traffic.
    void on_link_up(NodeId /*nbr*/) override {}
    void on_link_down(NodeId /*nbr*/) override {}
    void send_data(const FlowSpec& flow, std::uint64_t uid) override;
    void finish() override;

    enum class Mode { kNone, kPrimary, kBoth };
    Mode mode(NodeId dest) const;
    RouteRecord primary(NodeId dest) const;
    RouteRecord backup(NodeId dest) const;
    const std::vector<RouteRecord>* cached(NodeId dest) const;

    NodeId id() const { return me_; }

  private:
    struct CacheEntry {
        RouteRecord route; // me first, dest last
        SimTime inserted;
    };
    struct SourceState {
        RouteRecord primary;
        RouteRecord backup;
        Mode mode = Mode::kNone;
        bool need_probe = false;   // next backup copy asks for the switchover ack
        bool awaiting_ack = false;
        std::uint64_t probe_uid = 0;
        EventHandle ack_timer = 0;
        bool discovering = false;
        std::uint32_t request_id = 0;
        int tries = 0;
        double gap = 0.5;
        EventHandle retry_timer = 0;
        std::deque<DataBody> buffer;
        SignalMonitor first_hop_mon{1.5};
        EventHandle probe_timer = 0;
    };
    struct Window {
        std::vector<RouteRecord> candidates;
        bool replied = false;
    };
    struct RouteMonitor {
        NodeId upstream = -1;
        RouteRecord route;
        SimTime last_data = 0.0;
        SignalMonitor mon{1.5};
        EventHandle probe_timer = 0;
    };

    // data plane
    void tx_data(const RouteRecord& route, DataBody body, const char* tag, bool want_ack);
    void handle_data(const Frame& f, NodeId from);
    void drain(NodeId dest, SourceState& st);

    // discovery
    void start_discovery(NodeId dest);
    void emit_rreq(NodeId dest, SourceState& st);
    void retry_discovery(NodeId dest);
    void handle_rreq(const RreqBody& r, NodeId from);
    void reply_window(NodeId origin, std::uint32_t rid);
    void handle_rrep(const Frame& f, NodeId from);
    void install_routes(NodeId dest, RouteChoice choice);

    // maintenance
    void handle_link_failure(const Frame& f, NodeId next_hop);
    void handle_rerr(const Frame& f, NodeId from);
    void rerr_core(NodeId dest, NodeId a, NodeId b); // source-side route adjustment
    void send_rerr(const DataBody& d, NodeId broken_to);

    // preemption
    void observe_data(const Frame& f, NodeId from);
    void raise_warning(const DataBody& d);
    void handle_warning_frame(const Frame& f);
    void handle_warning(NodeId dest);
    void handle_ack(const Frame& f);
    void ack_timeout(NodeId dest);
    void schedule_src_probe(NodeId dest);
    void schedule_route_probe(std::pair<NodeId, NodeId> key);

    // cache
    void cache_add(RouteRecord route);
    void purge_link(NodeId a, NodeId b);
    std::optional<RouteRecord> cache_best(NodeId dest) const;

    static bool uses_link(const RouteRecord& r, NodeId a, NodeId b);
    void forward_on_path(Frame f);
    void trace_mode(NodeId dest, const char* state);

    NodeId me_;
    RouterContext ctx_;
    PdsrParams p_;
    std::map<NodeId, SourceState> src_;
    std::map<NodeId, std::vector<CacheEntry>> cache_;
    std::set<std::pair<NodeId, std::uint32_t>> seen_rreq_;
    std::map<std::pair<NodeId, std::uint32_t>, Window> windows_;
    std::map<std::pair<NodeId, NodeId>, RouteMonitor> monitors_; // (flow_src, flow_dst)
    std::map<NodeId, SimTime> discovery_t0_;
    std::uint32_t rreq_counter_ = 0;
};

} // namespace manet
