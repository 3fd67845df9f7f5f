#include <doctest.h>

#include <set>

#include "cmanet/engine.hpp"
#include "cmanet/error.hpp"
#include "harness.hpp"
#include "support.hpp"

using namespace cmanet;
using namespace cmanet::middleware;
using linkmodel::Channel;
using linkmodel::DataType;
using test::Harness;

namespace {

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::Io;
}

}  // namespace

TEST_CASE("phase order") {
    CHECK(phase_step_allowed(Phase::Installed, Phase::Registered));
    CHECK(phase_step_allowed(Phase::ManetActive, Phase::Connected));
    CHECK(phase_step_allowed(Phase::Connected, Phase::ManetActive));
    CHECK(phase_step_allowed(Phase::Connected, Phase::LoggedIn));
    CHECK_FALSE(phase_step_allowed(Phase::Installed, Phase::LoggedIn));
    CHECK_FALSE(phase_step_allowed(Phase::LoggedIn, Phase::Registered));
    CHECK_FALSE(phase_step_allowed(Phase::Registered, Phase::ManetActive));
    for (int p = 0; p < 5; ++p) CHECK(parse_phase(to_string(static_cast<Phase>(p))) == static_cast<Phase>(p));
}

TEST_CASE("register: fresh, duplicate, fifty unique credentials") {
    std::vector<std::string> ids;
    for (int i = 0; i < 50; ++i) ids.push_back("n" + std::to_string(i));
    Harness h(ids, std::vector<double>(50, 0.0), std::vector<double>(50, 0.0));

    h.mw.register_device(0, 0.0);
    CHECK(h.mw.phase(0) == Phase::Registered);
    CHECK(h.cloud.registered_count() == 1);
    CHECK(code_of([&] { h.mw.register_device(0, 0.0); }) == Errc::DuplicateId);
    CHECK(h.cloud.registered_count() == 1);
    CHECK(h.mw.phase(0) == Phase::Registered);

    std::set<std::string> creds{h.mw.device(0).credential};
    for (DeviceIndex i = 1; i < 50; ++i) creds.insert(h.mw.register_device(i, 0.0));
    CHECK(h.cloud.registered_count() == 50);
    CHECK(creds.size() == 50);
}

TEST_CASE("login: token, wrong credential, unregistered") {
    Harness h({"a", "b"}, {0, 0}, {0, 0});
    CHECK(code_of([&] { h.mw.login(1, "x", 0.0); }) == Errc::NotRegistered);
    const auto cred = h.mw.register_device(0, 0.0);
    CHECK(code_of([&] { h.mw.login(0, "wrong", 0.0); }) == Errc::AuthFailure);
    CHECK(h.mw.phase(0) == Phase::Registered);
    const auto token = h.mw.login(0, cred, 0.0);
    CHECK_FALSE(token.empty());
    CHECK(h.cloud.device_for_token(token) == "a");
    CHECK(h.mw.phase(0) == Phase::LoggedIn);
}

TEST_CASE("start_manet: membership, order, missing config") {
    std::vector<std::string> ids;
    for (int i = 0; i < 10; ++i) ids.push_back("n" + std::to_string(i));
    Harness h(ids, std::vector<double>(10, 0.0), std::vector<double>(10, 0.0));
    CHECK(code_of([&] { h.mw.start_manet(0, "m1", 0.0); }) == Errc::OrderViolation);
    const auto cred = h.mw.register_device(0, 0.0);
    h.mw.login(0, cred, 0.0);
    CHECK(code_of([&] { h.mw.start_manet(0, "", 0.0); }) == Errc::ConfigMissing);
    h.mw.start_manet(0, "m1", 0.0);
    CHECK(h.mw.phase(0) == Phase::ManetActive);
    CHECK(h.registry.manet("m1")->members.size() == 1);
    for (int i = 1; i < 10; ++i) h.up("n" + std::to_string(i));
    CHECK(h.registry.manets().size() == 1);
    CHECK(h.registry.manet("m1")->members.size() == 10);
}

TEST_CASE("discover: empty, in range, blacklisted, other MANETs") {
    Harness h({"a", "b", "c", "d"}, {0, 10, 200, 5}, {0, 0, 0, 0});
    h.up("a");
    h.up("b");
    h.up("c");
    h.up("d", "m2");
    auto r = h.mw.discover(0, Channel::WiFi, 0.0);
    REQUIRE(r.neighbors.size() == 1);
    CHECK(r.neighbors[0].id == "b");
    CHECK(r.neighbors[0].distance == 10.0);
    CHECK(h.mw.discover(2, Channel::WiFi, 0.0).neighbors.empty());
    h.mw.blacklist(0, "b", 0.0);
    CHECK(h.mw.discover(0, Channel::WiFi, 0.0).neighbors.empty());
    CHECK_THROWS_AS(h.mw.blacklist(0, "a", 0.0), Error);
}

TEST_CASE("discovery is symmetric without blacklists") {
    test::Gen g(1313);
    for (int round = 0; round < 20; ++round) {
        const int n = g.integer(2, 25);
        std::vector<std::string> ids;
        std::vector<double> xs, ys;
        for (int i = 0; i < n; ++i) {
            ids.push_back("p" + std::to_string(i));
            xs.push_back(g.real(0.0, 150.0));
            ys.push_back(g.real(0.0, 150.0));
        }
        Harness h(ids, xs, ys);
        for (const auto& id : ids) h.up(id);
        std::vector<std::set<std::string>> seen;
        for (int i = 0; i < n; ++i) {
            std::set<std::string> s;
            for (const auto& nb : h.mw.discover(static_cast<DeviceIndex>(i), Channel::WiFi, 0.0).neighbors) {
                CHECK(nb.distance <= 50.0);
                s.insert(nb.id);
            }
            seen.push_back(s);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(seen[static_cast<std::size_t>(i)].count(ids[static_cast<std::size_t>(j)]) ==
                      seen[static_cast<std::size_t>(j)].count(ids[static_cast<std::size_t>(i)]));
    }
}

TEST_CASE("connect: reachable target becomes Active") {
    Harness h({"a", "b"}, {0, 30}, {0, 0});
    h.up("a");
    h.up("b");
    const auto id = h.link("a", "b", 1.0);
    const auto& c = h.mw.connection(id);
    CHECK(c.state == ConnState::Active);
    CHECK(c.established_at == doctest::Approx(1.05));
    CHECK(h.mw.phase(0) == Phase::Connected);
    CHECK(h.mw.phase(1) == Phase::Connected);
    h.queue.run_until(10.0);
    CHECK(h.mw.connection(id).state == ConnState::Active);  // the timeout does not touch an Active link
}

TEST_CASE("connect: self, undiscovered, blacklisted either way") {
    Harness h({"a", "b", "c"}, {0, 30, 20}, {0, 0, 10});
    h.up("a");
    h.up("b");
    h.up("c");
    CHECK(code_of([&] { h.mw.connect(0, "a", 0.0); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { h.mw.connect(0, "b", 0.0); }) == Errc::NotDiscovered);
    h.mw.discover(0, Channel::WiFi, 0.0);
    h.mw.blacklist(1, "a", 0.0);  // b blacklists a; a still sees b
    CHECK(code_of([&] { h.mw.connect(0, "b", 0.0); }) == Errc::Refused);
    h.mw.blacklist(0, "c", 0.0);
    CHECK(code_of([&] { h.mw.connect(0, "c", 0.0); }) == Errc::Refused);
    CHECK(h.count("connect_refused") == 2);
}

TEST_CASE("blacklisting closes an existing link") {
    Harness h({"a", "b"}, {0, 30}, {0, 0});
    h.up("a");
    h.up("b");
    const auto id = h.link("a", "b", 1.0);
    h.mw.blacklist(1, "a", 2.0);
    CHECK(h.mw.connection(id).state == ConnState::Closed);
    CHECK(h.mw.phase(0) == Phase::ManetActive);
}

TEST_CASE("target leaving range between request and confirm ends in HandshakeTimeout") {
    Harness h({"a", "b"}, {0, 40}, {0, 0});
    h.up("a");
    h.up("b");
    h.mw.discover(0, Channel::WiFi, 1.0);
    const auto id = h.mw.connect(0, "b", 1.0);
    h.queue.schedule(1.02, [&](double t) { h.move("b", 80.0, 0.0, t); });
    h.queue.run_until(10.0);
    const auto& c = h.mw.connection(id);
    CHECK(c.state == ConnState::Closed);
    REQUIRE(c.failure.has_value());
    CHECK(*c.failure == Errc::HandshakeTimeout);
    CHECK(c.closed_at == doctest::Approx(3.0));
    CHECK(h.count("confirm_missed") == 1);
    CHECK(h.count("handshake_timeout") == 1);
    CHECK(h.count("conn_active") == 0);
    CHECK(audit_trace(h.trace.bytes()).empty());
}

TEST_CASE("send: 10 Mbit Text over a 50 m link takes one second") {
    Harness h({"a", "b"}, {0, 50}, {0, 0});
    h.up("a");
    h.up("b");
    const auto id = h.link("a", "b", 1.0);
    const auto tid = h.mw.send(id, 0, DataType::Text, 10e6, 2.0);
    h.queue.run_until(5.0);
    const auto& r = h.mw.transfer(tid);
    CHECK(r.status == metrics::TransferStatus::Delivered);
    CHECK(r.end - r.start == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.bits_delivered == 10e6);
}

TEST_CASE("send queues back to back on one link") {
    Harness h({"a", "b"}, {0, 20}, {0, 0});
    h.up("a");
    h.up("b");
    const auto id = h.link("a", "b", 1.0);
    const auto t1 = h.mw.send(id, 0, DataType::Text, 5e6, 2.0);
    const auto t2 = h.mw.send(id, 1, DataType::Text, 5e6, 2.0);
    CHECK(h.mw.transfer(t2).start == h.mw.transfer(t1).end);
    CHECK(h.mw.busy(id, 2.7));
    h.queue.run_until(4.0);
    CHECK_FALSE(h.mw.busy(id, 4.0));
}

TEST_CASE("send on a closed connection and a link broken half way") {
    Harness h({"a", "b"}, {0, 50}, {0, 0});
    h.up("a");
    h.up("b");
    const auto id = h.link("a", "b", 1.0);
    const auto tid = h.mw.send(id, 0, DataType::Text, 10e6, 2.0);
    h.queue.schedule(2.5, [&](double t) { h.move("b", 120.0, 0.0, t); });
    h.queue.run_until(5.0);
    const auto& r = h.mw.transfer(tid);
    CHECK(r.status == metrics::TransferStatus::Failed);
    CHECK(r.bits_delivered == doctest::Approx(5e6).epsilon(1e-12));
    CHECK(h.mw.connection(id).failure == Errc::LinkDown);
    CHECK(code_of([&] { h.mw.send(id, 0, DataType::Text, 1e6, 5.0); }) == Errc::ConnectionClosed);
}

TEST_CASE("the Bluetooth channel is short and Text only") {
    Harness h({"a", "b", "c"}, {0, 8, 30}, {0, 0, 0});
    h.up("a");
    h.up("b");
    h.up("c");
    const auto r = h.mw.discover(0, Channel::Bluetooth, 1.0);
    REQUIRE(r.neighbors.size() == 1);
    CHECK(r.neighbors[0].id == "b");
    const auto id = h.mw.connect(0, "b", 1.0);
    h.queue.run_until(1.2);
    CHECK(h.mw.connection(id).channel == Channel::Bluetooth);
    const auto tid = h.mw.send(id, 0, DataType::Text, 1e6, 2.0);
    CHECK(h.mw.transfer(tid).end - h.mw.transfer(tid).start == doctest::Approx(1.0));
    CHECK_THROWS_AS(h.mw.send(id, 0, DataType::Video, 1e6, 2.0), Error);
}

TEST_CASE("leaving a MANET closes links and returns to LoggedIn") {
    Harness h({"a", "b"}, {0, 20}, {0, 0});
    h.up("a");
    h.up("b");
    const auto id = h.link("a", "b", 1.0);
    h.mw.leave_manet(0, 2.0);
    CHECK(h.mw.phase(0) == Phase::LoggedIn);
    CHECK(h.mw.phase(1) == Phase::ManetActive);
    CHECK(h.mw.connection(id).failure == Errc::ConnectionClosed);
    CHECK(h.registry.manet("m1")->members.size() == 1);
    h.mw.start_manet(0, "m1", 3.0);
    CHECK(h.mw.phase(0) == Phase::ManetActive);
    CHECK(audit_trace(h.trace.bytes()).empty());
}
