#pragma once

#include <limits>
#include <span>
#include <vector>

#include "manetsim/engine.hpp"
#include "manetsim/geometry.hpp"
#include "manetsim/rng.hpp"

namespace manet {

struct FieldDim {
    double width = 500.0;
    double height = 500.0;
};

struct Waypoint {
    Vec2 destination;
    double speed = 0.0; // m/s, > 0
    double pause = 0.0; // seconds at the destination
};

/// One linear piece of a trajectory: position(t) = p0 + vel * (t - t0)
/// for t in [t0, t1). Pauses are segments with zero velocity.
struct Segment {
    SimTime t0 = 0.0;
    SimTime t1 = 0.0;
    Vec2 p0;
    Vec2 vel;

    Vec2 at(SimTime t) const { return p0 + vel * (t - t0); }
};

/// Piecewise-linear motion starting at t = 0. The last segment is held
/// open-ended: queries beyond it clamp to its final position.
struct Trajectory {
    std::vector<Segment> segments;

    Vec2 position_at(SimTime t) const;
    static Trajectory stationary(Vec2 p);
};

/// Draw the next waypoint: destination uniform over the field, speed
/// uniform over [v_min, v_max], fixed pause. Throws on v_max < v_min or
/// v_min <= 0.
Waypoint next_waypoint(RngStream& rng, FieldDim field, double v_min, double v_max, double pause);

/// Build a random-waypoint trajectory from `start`. Movement begins at
/// t = 0 with no initial pause and alternates move/pause legs until
/// move_until, after which the node rests where it is. Draw order per leg
/// is fixed (dest.x, dest.y, speed) so traces are seed-reproducible.
Trajectory random_waypoint_trajectory(RngStream& rng, Vec2 start, FieldDim field, double v_min,
                                      double v_max, double pause, SimTime move_until);

/// Incremental position lookup for non-decreasing query times.
class TrajectoryCursor {
  public:
    explicit TrajectoryCursor(const Trajectory* traj = nullptr) : traj_(traj) {}
    Vec2 at(SimTime t);

  private:
    const Trajectory* traj_;
    std::size_t idx_ = 0;
};

struct LinkEvent {
    SimTime t = 0.0;
    NodeId a = 0; // a < b
    NodeId b = 0;
    bool up = false;

    friend bool operator==(const LinkEvent&, const LinkEvent&) = default;
};
bool link_event_less(const LinkEvent& x, const LinkEvent& y);

/// Exact range-crossing times for every node pair over [0, horizon],
/// solved on the piecewise-linear segments (quadratic roots, no sampling).
/// An event is emitted only where the in-range predicate (distance <=
/// range, boundary inclusive) actually changes. Sorted by (t, a, b, up).
///
/// link_events() runs the pairwise kernel across OpenMP threads and is
/// bit-identical to the serial reference for any thread count.
std::vector<LinkEvent> link_events(std::span<const Trajectory> trajs, double range,
                                   SimTime horizon);
std::vector<LinkEvent> link_events_serial(std::span<const Trajectory> trajs, double range,
                                          SimTime horizon);

/// Pairs in range at time t (boundary inclusive), a < b, lexicographic.
std::vector<std::pair<NodeId, NodeId>> adjacency_at(std::span<const Trajectory> trajs,
                                                    double range, SimTime t);

} // namespace manet
