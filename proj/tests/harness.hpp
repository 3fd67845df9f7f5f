#pragma once

// A small hand-driven network: registry, cloud, queue and middleware wired
// together the way the engine wires them, with positions the test moves.

#include <string>
#include <vector>

#include "cmanet/cloud.hpp"
#include "cmanet/event_queue.hpp"
#include "cmanet/middleware.hpp"
#include "cmanet/network.hpp"
#include "cmanet/trace.hpp"

namespace cmanet::test {

struct Harness {
    ManetRegistry registry;
    Trace trace;
    cloud::Cloud cloud;
    EventQueue queue;
    std::vector<double> x;
    std::vector<double> y;
    middleware::Middleware mw;

    Harness(std::vector<std::string> ids, std::vector<double> xs, std::vector<double> ys,
            middleware::MiddlewareConfig config = {})
        : registry(std::move(ids)),
          cloud(registry, trace, cloud::CloudConfig{0.05, config.rates, config.range, config.overhead, config.lifetime}),
          x(std::move(xs)),
          y(std::move(ys)),
          mw(registry, cloud, queue, trace, config) {
        mw.set_positions({x, y});
    }

    DeviceIndex at(const std::string& id) const { return mw.index_of(id); }

    /// Register, log in with the issued credential, start the MANET.
    void up(const std::string& id, const std::string& manet = "m1", double t = 0.0) {
        const DeviceIndex i = at(id);
        const std::string cred = mw.register_device(i, t);
        mw.login(i, cred, t);
        mw.start_manet(i, manet, t);
    }

    /// Discovery plus a connect, run until the handshake settles.
    std::uint64_t link(const std::string& a, const std::string& b, double t) {
        queue.run_until(t);
        mw.discover(at(a), linkmodel::Channel::WiFi, t);
        const auto id = mw.connect(at(a), b, t);
        queue.run_until(t + 0.1);
        return id;
    }

    void move(const std::string& id, double nx, double ny, double t) {
        const DeviceIndex i = at(id);
        x[i] = nx;
        y[i] = ny;
        mw.on_positions(t);
    }

    int count(const std::string& event) const {
        int n = 0;
        for (const auto& line : parse_trace(trace.bytes())) n += line.event == event ? 1 : 0;
        return n;
    }
};

}  // namespace cmanet::test
