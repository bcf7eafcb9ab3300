#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

namespace manet {

/// Simulated time in seconds. The clock never runs backwards.
using SimTime = double;

using EventFn = std::function<void()>;
using EventHandle = std::uint64_t;

/// Discrete-event kernel. Events fire in (time, insertion) order, so two
/// events scheduled for the same instant dispatch FIFO. Single-threaded:
/// one Engine per simulation run.
class Engine {
  public:
    /// Schedule fn at fire_at. Throws std::invalid_argument("past event")
    /// if fire_at precedes the current clock.
    EventHandle schedule(SimTime fire_at, EventFn fn);

    /// Remove a pending event. Returns false if it already fired or was
    /// already cancelled.
    bool cancel(EventHandle h);

    /// Dispatch every event with fire_at <= t_end, then set clock = t_end.
    /// Returns the number of events dispatched (cancelled ones excluded).
    std::size_t run_until(SimTime t_end);

    SimTime now() const { return now_; }
    std::size_t pending_count() const { return pending_.size(); }

  private:
    struct QEntry {
        SimTime t;
        EventHandle seq;
    };
    struct Later {
        bool operator()(const QEntry& a, const QEntry& b) const {
            if (a.t != b.t)
                return a.t > b.t;
            return a.seq > b.seq;
        }
    };

    SimTime now_ = 0.0;
    EventHandle next_seq_ = 1;
    std::priority_queue<QEntry, std::vector<QEntry>, Later> heap_;
    std::unordered_map<EventHandle, EventFn> pending_;
};

} // namespace manet
