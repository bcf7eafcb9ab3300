#include "manetsim/medium.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

namespace manet {

PositionOracle::PositionOracle(std::vector<Trajectory> trajs) : trajs_(std::move(trajs)) {
    cursors_.reserve(trajs_.size());
    for (const auto& t : trajs_)
        cursors_.emplace_back(&t);
}

Vec2 PositionOracle::at(NodeId n, SimTime t) const {
    return cursors_.at(static_cast<std::size_t>(n)).at(t);
}

Medium::Medium(Engine& engine, const PositionOracle& positions, MetricLedger& ledger,
               TraceWriter& trace, double range, double bandwidth_bps)
    : engine_(engine), positions_(positions), ledger_(ledger), trace_(trace), range_(range),
      bandwidth_(bandwidth_bps) {
    assert(range_ > 0.0 && bandwidth_ > 0.0);
}

void Medium::set_handlers(DeliverFn deliver, UnicastFailFn fail) {
    deliver_ = std::move(deliver);
    fail_ = std::move(fail);
}

double Medium::strength(Vec2 a, Vec2 b, double range) {
    double d = distance(a, b);
    if (d == 0.0)
        return std::numeric_limits<double>::infinity();
    double q = range / d;
    return q * q;
}

bool Medium::in_range(NodeId a, NodeId b) const {
    SimTime t = engine_.now();
    return in_range(positions_.at(a, t), positions_.at(b, t), range_);
}

double Medium::strength(NodeId a, NodeId b) const {
    SimTime t = engine_.now();
    return strength(positions_.at(a, t), positions_.at(b, t), range_);
}

void Medium::broadcast(NodeId sender, Frame f) {
    enqueue(sender, std::nullopt, std::move(f));
}

void Medium::unicast(NodeId sender, NodeId next_hop, Frame f) {
    enqueue(sender, next_hop, std::move(f));
}

void Medium::enqueue(NodeId sender, std::optional<NodeId> next_hop, Frame f) {
    f.frame_uid = next_frame_uid_++;
    queue_.push_back(Pending{sender, next_hop, std::move(f), engine_.now()});
    try_grants();
}

bool Medium::neighborhood_conflict(NodeId x, const std::vector<NodeId>& occupied,
                                   SimTime t) const {
    // x conflicts with y when some node (possibly x or y itself) is in
    // range of both; mutual exclusion is enforced around receivers, so
    // hidden-terminal collisions cannot occur.
    Vec2 px = positions_.at(x, t);
    const int n = positions_.node_count();
    for (NodeId y : occupied) {
        if (y == x)
            return true;
        Vec2 py = positions_.at(y, t);
        if (distance(px, py) > 2.0 * range_)
            continue;
        for (NodeId c = 0; c < n; ++c) {
            Vec2 pc = positions_.at(c, t);
            if (distance(px, pc) <= range_ && distance(py, pc) <= range_)
                return true;
        }
    }
    return false;
}

void Medium::try_grants() {
    SimTime now = engine_.now();
    // Single FIFO pass. A blocked request reserves its spot: later
    // requests that conflict with it stay queued too, which keeps grants
    // FIFO within every conflict group.
    std::vector<NodeId> occupied;
    occupied.reserve(active_.size() + queue_.size());
    for (const auto& a : active_)
        occupied.push_back(a.sender);
    std::deque<Pending> still_blocked;
    while (!queue_.empty()) {
        Pending p = std::move(queue_.front());
        queue_.pop_front();
        if (neighborhood_conflict(p.sender, occupied, now)) {
            occupied.push_back(p.sender);
            still_blocked.push_back(std::move(p));
            continue;
        }
        occupied.push_back(p.sender);
        SimTime until = now + static_cast<double>(p.frame.size_bytes) * 8.0 / bandwidth_;
        active_.push_back(Active{p.sender, until});
        ++grants_;
        engine_.schedule(until, [this, p = std::move(p)]() mutable { complete(std::move(p)); });
    }
    queue_ = std::move(still_blocked);
}

void Medium::complete(Pending p) {
    SimTime now = engine_.now();
    // retire the active entry
    for (auto it = active_.begin(); it != active_.end(); ++it) {
        if (it->sender == p.sender && it->until == now) {
            active_.erase(it);
            break;
        }
    }
    const Frame& f = p.frame;
    if (p.next_hop) {
        NodeId to = *p.next_hop;
        bool ok = in_range(p.sender, to);
        ledger_.on_tx(p.sender, f, ok);
        if (trace_.enabled()) {
            char tobuf[16];
            std::snprintf(tobuf, sizeof(tobuf), "%d", to);
            trace_.tx(now, p.sender, f, ok, tobuf);
        }
        if (ok) {
            ledger_.on_rx(to, f);
            trace_.rx(now, to, f, p.sender);
            if (deliver_)
                deliver_(to, f, p.sender);
        } else if (fail_) {
            fail_(p.sender, to, f);
        }
    } else {
        std::vector<NodeId> receivers;
        const int n = positions_.node_count();
        for (NodeId r = 0; r < n; ++r)
            if (r != p.sender && in_range(p.sender, r))
                receivers.push_back(r);
        // A broadcast nobody was around to hear is not a successful send.
        ledger_.on_tx(p.sender, f, !receivers.empty());
        trace_.tx(now, p.sender, f, !receivers.empty(), "all");
        for (NodeId r : receivers) {
            ledger_.on_rx(r, f);
            trace_.rx(now, r, f, p.sender);
            if (deliver_)
                deliver_(r, f, p.sender);
        }
    }
    try_grants();
}

} // namespace manet
