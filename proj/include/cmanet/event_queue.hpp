#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace cmanet {

/// Virtual-clock event queue ordered by (time, insertion sequence).
class EventQueue {
public:
    using Handler = std::function<void(double)>;

    /// Throws Errc::InvalidArgument when t lies before the current clock.
    void schedule(double t, Handler handler);

    /// Runs every event with time <= t_end, in order.
    void run_until(double t_end);

    /// Pops and runs one event. Returns false when the queue is empty.
    bool step();

    double now() const noexcept { return now_; }
    std::size_t pending() const noexcept { return heap_.size(); }
    std::uint64_t processed() const noexcept { return processed_; }

private:
    struct Event {
        double time;
        std::uint64_t seq;
        Handler handler;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t processed_ = 0;
    double now_ = 0.0;
};

}  // namespace cmanet
