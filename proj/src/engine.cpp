#include "manetsim/engine.hpp"

#include <stdexcept>
#include <utility>

namespace manet {

EventHandle Engine::schedule(SimTime fire_at, EventFn fn) {
    if (fire_at < now_)
        throw std::invalid_argument("past event");
    EventHandle h = next_seq_++;
    heap_.push(QEntry{fire_at, h});
    pending_.emplace(h, std::move(fn));
    return h;
}

bool Engine::cancel(EventHandle h) {
    return pending_.erase(h) > 0;
}

std::size_t Engine::run_until(SimTime t_end) {
    if (t_end < now_)
        throw std::invalid_argument("t_end precedes clock");
    std::size_t dispatched = 0;
    while (!heap_.empty() && heap_.top().t <= t_end) {
        QEntry e = heap_.top();
        heap_.pop();
        auto it = pending_.find(e.seq);
        if (it == pending_.end())
            continue; // cancelled
        EventFn fn = std::move(it->second);
        pending_.erase(it);
        now_ = e.t;
        fn();
        ++dispatched;
    }
    now_ = t_end;
    return dispatched;
}

} // namespace manet
