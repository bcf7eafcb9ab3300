#include "manetsim/mobility.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace manet {

Vec2 Trajectory::position_at(SimTime t) const {
    assert(!segments.empty());
    if (t <= segments.front().t0)
        return segments.front().p0;
    // binary search: last segment with t0 <= t
    std::size_t lo = 0, hi = segments.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        if (segments[mid].t0 <= t)
            lo = mid;
        else
            hi = mid - 1;
    }
    const Segment& s = segments[lo];
    SimTime tc = std::min(t, s.t1);
    return s.at(tc);
}

Trajectory Trajectory::stationary(Vec2 p) {
    Trajectory tr;
    tr.segments.push_back(Segment{0.0, std::numeric_limits<SimTime>::infinity(), p, {0.0, 0.0}});
    return tr;
}

Waypoint next_waypoint(RngStream& rng, FieldDim field, double v_min, double v_max, double pause) {
    if (v_min <= 0.0)
        throw std::invalid_argument("speed range minimum must be positive");
    if (v_max < v_min)
        throw std::invalid_argument("degenerate speed range: max < min");
    if (pause < 0.0)
        throw std::invalid_argument("negative pause");
    Waypoint w;
    w.destination.x = rng.uniform(0.0, field.width);
    w.destination.y = rng.uniform(0.0, field.height);
    w.speed = (v_min == v_max) ? v_min : rng.uniform(v_min, v_max);
    w.pause = pause;
    return w;
}

Trajectory random_waypoint_trajectory(RngStream& rng, Vec2 start, FieldDim field, double v_min,
                                      double v_max, double pause, SimTime move_until) {
    Trajectory tr;
    Vec2 pos = start;
    SimTime t = 0.0;
    while (t < move_until) {
        Waypoint w = next_waypoint(rng, field, v_min, v_max, pause);
        double dist = distance(pos, w.destination);
        if (dist > 0.0) {
            SimTime travel = dist / w.speed;
            SimTime t1 = std::min(t + travel, move_until);
            Vec2 vel = (w.destination - pos) * (w.speed / dist);
            tr.segments.push_back(Segment{t, t1, pos, vel});
            if (t1 < t + travel) { // clipped mid-leg: freeze where we are
                Vec2 stop = tr.segments.back().at(t1);
                tr.segments.back().t1 = t1;
                tr.segments.push_back(
                    Segment{t1, std::numeric_limits<SimTime>::infinity(), stop, {0.0, 0.0}});
                return tr;
            }
            t = t + travel;
            pos = w.destination;
        } else {
            pos = w.destination;
        }
        if (w.pause > 0.0) {
            SimTime t1 = std::min(t + w.pause, move_until);
            tr.segments.push_back(Segment{t, t1, pos, {0.0, 0.0}});
            t += w.pause;
        }
    }
    tr.segments.push_back(Segment{t, std::numeric_limits<SimTime>::infinity(), pos, {0.0, 0.0}});
    return tr;
}

Vec2 TrajectoryCursor::at(SimTime t) {
    const auto& segs = traj_->segments;
    while (idx_ + 1 < segs.size() && segs[idx_ + 1].t0 <= t)
        ++idx_;
    while (idx_ > 0 && segs[idx_].t0 > t)
        --idx_; // out-of-order query; fall back
    const Segment& s = segs[idx_];
    return s.at(std::min(t, s.t1));
}

bool link_event_less(const LinkEvent& x, const LinkEvent& y) {
    if (x.t != y.t)
        return x.t < y.t;
    if (x.a != y.a)
        return x.a < y.a;
    if (x.b != y.b)
        return x.b < y.b;
    return x.up < y.up;
}

namespace {

// Roots of a*tau^2 + b*tau + c = 0 inside [0, w), ascending.
int quad_roots_in(double a, double b, double c, double w, double out[2]) {
    constexpr double kTiny = 1e-15;
    int n = 0;
    if (std::abs(a) < kTiny) {
        if (std::abs(b) < kTiny)
            return 0;
        double r = -c / b;
        if (r >= 0.0 && r < w)
            out[n++] = r;
        return n;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0)
        return 0; // tangency never flips the predicate
    double sq = std::sqrt(disc);
    double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double r1 = q / a;
    double r2 = (q != 0.0) ? c / q : r1;
    if (r1 > r2)
        std::swap(r1, r2);
    if (r1 >= 0.0 && r1 < w)
        out[n++] = r1;
    if (r2 >= 0.0 && r2 < w && r2 != r1)
        out[n++] = r2;
    return n;
}

// Crossing events for one pair, appended to out.
void pair_events(const Trajectory& ta, const Trajectory& tb, NodeId ia, NodeId ib, double range,
                 SimTime horizon, std::vector<LinkEvent>& out) {
    const double r2 = range * range;
    std::size_t sa = 0, sb = 0;
    SimTime t = 0.0;
    bool in = distance(ta.position_at(0.0), tb.position_at(0.0)) <= range;
    while (t < horizon) {
        while (sa + 1 < ta.segments.size() && ta.segments[sa].t1 <= t)
            ++sa;
        while (sb + 1 < tb.segments.size() && tb.segments[sb].t1 <= t)
            ++sb;
        const Segment& A = ta.segments[sa];
        const Segment& B = tb.segments[sb];
        SimTime wend = std::min({A.t1, B.t1, horizon});
        if (wend <= t) {
            // Degenerate window (zero length); step to it and continue.
            t = std::nextafter(wend, std::numeric_limits<SimTime>::infinity());
            continue;
        }
        // Relative motion over [t, wend)
        Vec2 d0 = A.at(t) - B.at(t);
        Vec2 dv = A.vel - B.vel;
        // The window may open with a state change (e.g. a crossing exactly
        // at a segment boundary that the previous window's half-open
        // interval missed).
        bool in_now = d0.norm2() <= r2;
        if (in_now != in) {
            out.push_back(LinkEvent{t, ia, ib, in_now});
            in = in_now;
        }
        double w = wend - t;
        double roots[2];
        int n = quad_roots_in(dv.norm2(), 2.0 * d0.dot(dv), d0.norm2() - r2, w, roots);
        for (int i = 0; i < n; ++i) {
            double probe = (i + 1 < n) ? 0.5 * (roots[i] + roots[i + 1]) : 0.5 * (roots[i] + w);
            bool state = (d0 + dv * probe).norm2() <= r2;
            if (state != in) {
                out.push_back(LinkEvent{t + roots[i], ia, ib, state});
                in = state;
            }
        }
        t = wend;
    }
}

} // namespace

std::vector<LinkEvent> link_events_serial(std::span<const Trajectory> trajs, double range,
                                          SimTime horizon) {
    if (range <= 0.0)
        throw std::invalid_argument("range must be positive");
    const int n = static_cast<int>(trajs.size());
    std::vector<LinkEvent> out;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            pair_events(trajs[a], trajs[b], a, b, range, horizon, out);
    std::sort(out.begin(), out.end(), link_event_less);
    return out;
}

std::vector<LinkEvent> link_events(std::span<const Trajectory> trajs, double range,
                                   SimTime horizon) {
    if (range <= 0.0)
        throw std::invalid_argument("range must be positive");
    const int n = static_cast<int>(trajs.size());
    const int npairs = n * (n - 1) / 2;
    // Flattened pair index -> (a, b); each pair's events are independent,
    // so the per-pair results are bitwise identical to the serial path.
    std::vector<std::vector<LinkEvent>> per_pair(npairs);
#pragma omp parallel for schedule(dynamic, 16)
    for (int k = 0; k < npairs; ++k) {
        // invert k = a*n - a*(a+1)/2 + (b - a - 1)
        int a = 0;
        long rem = k;
        while (rem >= n - 1 - a) {
            rem -= n - 1 - a;
            ++a;
        }
        int b = a + 1 + static_cast<int>(rem);
        pair_events(trajs[a], trajs[b], a, b, range, horizon, per_pair[k]);
    }
    std::vector<LinkEvent> out;
    for (auto& v : per_pair)
        out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end(), link_event_less);
    return out;
}

std::vector<std::pair<NodeId, NodeId>> adjacency_at(std::span<const Trajectory> trajs,
                                                    double range, SimTime t) {
    std::vector<std::pair<NodeId, NodeId>> pairs;
    const int n = static_cast<int>(trajs.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (distance(trajs[a].position_at(t), trajs[b].position_at(t)) <= range)
                pairs.emplace_back(a, b);
    return pairs;
}

} // namespace manet
