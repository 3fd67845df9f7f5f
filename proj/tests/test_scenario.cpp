#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cmanet/engine.hpp"
#include "cmanet/error.hpp"
#include "cmanet/scenario.hpp"
#include "cmanet/sweep.hpp"
#include "cmanet/tables.hpp"
#include "support.hpp"

using namespace cmanet;

namespace {

void same_config(const ScenarioConfig& a, const ScenarioConfig& b) {
    CHECK(a.name == b.name);
    CHECK(a.seed == b.seed);
    CHECK(a.duration == b.duration);
    CHECK(a.dt == b.dt);
    CHECK(a.arena.width == b.arena.width);
    CHECK(a.range == b.range);
    CHECK(a.lifetime.mu() == b.lifetime.mu());
    CHECK(a.lifetime.sigma() == b.lifetime.sigma());
    CHECK(a.mobility.lambda == b.mobility.lambda);
    CHECK(a.mobility.mean_direction == b.mobility.mean_direction);
    CHECK(a.device_count == b.device_count);
    CHECK(a.custom_devices.size() == b.custom_devices.size());
    CHECK(a.experiment.enabled == b.experiment.enabled);
    CHECK(a.experiment.epsilon_k == b.experiment.epsilon_k);
    CHECK(a.workload.size() == b.workload.size());
    CHECK(a.rates.to_csv() == b.rates.to_csv());
    // The strongest check: both configs drive byte-identical simulations.
    CHECK(to_toml(a) == to_toml(b));
}

}  // namespace

TEST_CASE("every preset validates and round-trips through TOML") {
    for (const auto& name : preset_names()) {
        INFO(name);
        const auto c = preset(name);
        CHECK(c.violations().empty());
        same_config(c, parse_scenario(to_toml(c)));
    }
    CHECK_THROWS_AS(preset("table9"), Error);
}

TEST_CASE("random configs round-trip through TOML with exact doubles") {
    test::Gen g(1616);
    for (int i = 0; i < 100; ++i) {
        auto c = traffic_preset(g.real(1.0, 120.0), g.integer(1, 60), g.real(0.01, 1.0));
        c.seed = g.next() >> 1;
        c.duration = g.real(10.0, 500.0);
        c.mobility.mean_direction = g.real(0.0, 6.0);
        c.lifetime = numerics::LogNormalParams(g.real(0.0, 6.0), g.real(0.1, 2.0));
        c.overhead = g.real(0.0, 0.5);
        c.connectivity.alpha = g.real(0.1, 50.0);
        INFO(test::case_label(1616, i));
        const auto back = parse_scenario(to_toml(c));
        same_config(c, back);
        CHECK(back.seed == c.seed);
        CHECK(back.overhead == c.overhead);
    }
}

TEST_CASE("schema errors are all reported") {
    const std::string text = R"(
name = "bad"
duration = -5
colour = "red"
[mobility]
lambda = 2.0
wobble = 1
[[workload]]
t = 1.0
action = "fly"
)";
    try {
        parse_scenario(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() >= 4);
    }
    CHECK_THROWS_AS(parse_scenario("name = [unclosed"), ValidationError);
}

TEST_CASE("load_scenario reads files and reports missing ones as I/O") {
    try {
        load_scenario("/definitely/not/here.toml");
        FAIL("expected Io");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Io);
    }
    const auto path = std::filesystem::temp_directory_path() / "cmanet-scenario-test.toml";
    {
        std::ofstream out(path);
        out << to_toml(preset("relay-demo"));
    }
    CHECK(load_scenario(path).name == "relay-demo");
    std::filesystem::remove(path);
}

TEST_CASE("degree-valued headings are converted") {
    const auto c = parse_scenario(R"(
[mobility]
mean_direction_deg = 90.0
[devices]
count = 1
[[devices.custom]]
id = "x"
x = 1.0
y = 1.0
direction_deg = 180.0
)");
    CHECK(c.mobility.mean_direction == doctest::Approx(std::numbers::pi / 2));
    REQUIRE(c.custom_devices.size() == 1);
    CHECK(*c.custom_devices[0].direction == doctest::Approx(std::numbers::pi));
}

TEST_CASE("device list: custom first, generated after") {
    auto c = preset("table1");
    c.device_count = 3;
    c.custom_devices = {DeviceSpec{"zed", true, 1.0, 2.0, {}, false, ""}};
    const auto d = c.devices();
    REQUIRE(d.size() == 3);
    CHECK(d[0].id == "zed");
    CHECK(d[1].id == "d01");
    CHECK(d[2].id == "d02");
}

TEST_CASE("sweep cardinality, seeds and errors") {
    auto c = preset("table1");
    c.duration = 20.0;
    const std::vector<double> devices{5, 10, 50};
    const auto runs = sweep(c, "devices", devices);
    REQUIRE(runs.size() == 3);
    CHECK(runs[0].config.device_count == 5);
    CHECK(runs[2].config.device_count == 50);
    CHECK(runs[0].config.seed != runs[1].config.seed);

    std::vector<double> eps(kTableEpsilons.begin(), kTableEpsilons.end());
    const auto by_eps = sweep(c, "epsilon_k", eps, 3);
    REQUIRE(by_eps.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(by_eps[i].config.experiment.epsilon_k == eps[i]);
    const auto serial = sweep(c, "epsilon_k", eps, 1);
    for (std::size_t i = 0; i < 6; ++i) CHECK(serial[i].digest == by_eps[i].digest);

    try {
        sweep(c, "colour", devices);
        FAIL("expected UnknownAxis");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownAxis);
    }
    CHECK_THROWS_AS(sweep(c, "devices", std::vector<double>{}), Error);
    CHECK_THROWS_AS(sweep(c, "devices", std::vector<double>{2.5}), Error);
    CHECK_THROWS_AS(sweep(c, "range", std::vector<double>{75}), Error);
    CHECK(apply_axis(c, SweepAxis::Range, 200).range.radius() == 200.0);
    CHECK(apply_axis(c, SweepAxis::Speed, 80).mobility.max_speed >= 160.0);
}

TEST_CASE("table shapes") {
    const auto t3 = make_table(3, 1, 1);
    CHECK(t3.metrics.size() == 4);
    CHECK(t3.passed);
    CHECK(t3.csv.rfind("data_type,range,simulated_Mbps,reference_Mbps,deviation_pct\n", 0) == 0);
    CHECK_THROWS_AS(make_table(9, 1, 1), Error);
    CHECK_THROWS_AS(make_table(0, 1, 1), Error);
}
