#pragma once

#include <queue>
#include <set>
#include <string>
#include <vector>

#include "manetsim/sim.hpp"

namespace manet::test {

inline Trajectory still(double x, double y) { return Trajectory::stationary(Vec2{x, y}); }

/// Rest at `start` until t0, move with velocity `vel` during [t0, t1],
/// rest at the endpoint afterwards.
inline Trajectory drift(Vec2 start, Vec2 vel, SimTime t0, SimTime t1) {
    Trajectory tr;
    if (t0 > 0.0)
        tr.segments.push_back(Segment{0.0, t0, start, {0.0, 0.0}});
    tr.segments.push_back(Segment{t0, t1, start, vel});
    Vec2 end = start + vel * (t1 - t0);
    tr.segments.push_back(Segment{t1, std::numeric_limits<SimTime>::infinity(), end, {0, 0}});
    return tr;
}

inline SimConfig fixed_config(Protocol p, std::vector<Trajectory> trajs,
                              std::vector<FlowSpec> flows, SimTime duration) {
    SimConfig c;
    c.protocol = p;
    c.trajectories = std::move(trajs);
    c.nodes = static_cast<int>(c.trajectories.size());
    c.flows = std::move(flows);
    c.duration = duration;
    c.collect_trace = true;
    return c;
}

inline FlowSpec cbr(int id, NodeId src, NodeId dst, double interval, SimTime start, SimTime stop,
                    std::uint32_t payload = 512) {
    FlowSpec f;
    f.id = id;
    f.src = src;
    f.dst = dst;
    f.interval = interval;
    f.start = start;
    f.stop = stop;
    f.payload = payload;
    return f;
}

/// Brute-force reachability on the ground-truth connectivity graph.
inline bool oracle_reachable(const std::vector<Trajectory>& trajs, double range, SimTime t,
                             NodeId from, NodeId to) {
    const int n = static_cast<int>(trajs.size());
    std::vector<Vec2> pos;
    for (const auto& tr : trajs)
        pos.push_back(tr.position_at(t));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<NodeId> q;
    q.push(from);
    seen[static_cast<std::size_t>(from)] = true;
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        if (u == to)
            return true;
        for (NodeId v = 0; v < n; ++v) {
            if (!seen[static_cast<std::size_t>(v)] &&
                distance(pos[static_cast<std::size_t>(u)], pos[static_cast<std::size_t>(v)]) <=
                    range) {
                seen[static_cast<std::size_t>(v)] = true;
                q.push(v);
            }
        }
    }
    return false;
}

inline int count_lines_with(const std::string& text, const std::string& needle) {
    int n = 0;
    std::size_t pos = 0;
    while (true) {
        std::size_t end = text.find('\n', pos);
        std::string line = text.substr(pos, end == std::string::npos ? end : end - pos);
        if (line.find(needle) != std::string::npos)
            ++n;
        if (end == std::string::npos)
            break;
        pos = end + 1;
    }
    return n;
}

/// Time of the first trace line containing `needle`, or -1.
inline double first_time_of(const std::string& text, const std::string& needle) {
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        std::string line =
            text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        if (line.find(needle) != std::string::npos && line.rfind("t=", 0) == 0)
            return std::stod(line.substr(2));
        if (end == std::string::npos)
            break;
        pos = end + 1;
    }
    return -1.0;
}

} // namespace manet::test
