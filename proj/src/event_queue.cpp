#include "cmanet/event_queue.hpp"

#include <cmath>
#include <string>

#include "cmanet/error.hpp"

namespace cmanet {

void EventQueue::schedule(double t, Handler handler) {
    if (!std::isfinite(t) || t < now_)
        throw Error(Errc::InvalidArgument, "event scheduled at " + std::to_string(t) + " before clock " +
                                               std::to_string(now_));
    heap_.push(Event{t, next_seq_++, std::move(handler)});
}

bool EventQueue::step() {
    if (heap_.empty()) return false;
    // priority_queue::top is const; the handler is copied out before pop.
    Event ev = heap_.top();
    heap_.pop();
    now_ = ev.time;
    ++processed_;
    ev.handler(ev.time);
    return true;
}

void EventQueue::run_until(double t_end) {
    while (!heap_.empty() && heap_.top().time <= t_end) step();
    if (now_ < t_end) now_ = t_end;
}

}  // namespace cmanet
