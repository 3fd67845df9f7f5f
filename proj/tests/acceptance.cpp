// Acceptance run: one PASS/FAIL line per primary criterion. Exit status 1
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cmanet/engine.hpp"
#include "cmanet/linkmodel.hpp"
#include "cmanet/metrics.hpp"
#include "cmanet/mobility.hpp"
#include "cmanet/numerics.hpp"
#include "cmanet/oracles/oracles.hpp"
#include "cmanet/rng.hpp"
#include "cmanet/scenario.hpp"
#include "cmanet/tables.hpp"
#include "support.hpp"

using namespace cmanet;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Verdict throughput_table(int id, double limit_s) {
    const auto t0 = Clock::now();
    const auto t = cmanet::throughput_table(id);
    const double elapsed = seconds_since(t0);
    const auto dev = t.deviation_pct();
    double worst = 0.0;
    for (double d : dev) worst = std::max(worst, std::fabs(d));
    const bool ok = t.within(kThroughputTolerancePct) && elapsed < limit_s;
    return {ok, fmt("%s: Text %.3f Image %.3f Voice %.3f Video %.3f Mbps, max |dev| %.2e%% (tol %.0f%%), %.2f s (limit %.0f s)",
                    std::string(t.range.name()).c_str(), t.simulated[0], t.simulated[1], t.simulated[2], t.simulated[3],
                    worst, kThroughputTolerancePct, elapsed, limit_s)};
}

Verdict table3() { return throughput_table(3, 5.0); }

Verdict tables45() {
    const auto a = throughput_table(4, 5.0);
    const auto b = throughput_table(5, 5.0);
    return {a.pass && b.pass, a.detail + "; " + b.detail};
}

Verdict tables12() {
    const auto t0 = Clock::now();
    const std::uint64_t seed = preset("table1").seed;
    const auto t1 = transmission_table(1, seed, 1);
    const auto t2 = transmission_table(2, seed, 1);
    const double elapsed = seconds_since(t0);
    int held = 0;
    for (const auto* t : {&t1, &t2})
        for (std::size_t j = 0; j < kTableEpsilons.size(); ++j)
            held += t->score[2][j] > t->score[1][j] && t->score[1][j] > t->score[0][j];
    const bool ok = t1.ordering_holds() && t2.ordering_holds() && elapsed < 60.0;
    return {ok, fmt("score(50) > score(10) > score(5) in %d/12 columns, %.2f s (limit 60 s)", held, elapsed)};
}

Verdict session_life_grid() {
    // elapsed = f * median = f * e^mu gives z = ln(f) / sigma, independent of
    // mu, and E[L | L > elapsed] = e^mu * E[e^{sigma Z} | Z > z]. One 1e7
    // sample set per (sigma, f) therefore serves all five mu values exactly.
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::string where;
    int points = 0;
    for (int s = 0; s < 5; ++s) {
        const double sigma = 0.2 + 0.25 * s;
        for (int e = 0; e < 5; ++e) {
            const double f = 0.75 * e;
            const auto mc = oracles::lognormal_conditional_mc_mean(0.0, sigma, f, 10'000'000,
                                                                   0xC0FFEEULL + 10ULL * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(e));
            for (int m = 0; m < 5; ++m) {
                const double mu = 0.75 * m;
                const double elapsed = f * std::exp(mu);
                const double closed = linkmodel::session_life({numerics::LogNormalParams(mu, sigma), elapsed});
                const double ref = std::exp(mu) * mc.mean;
                const double rel = std::fabs(closed - ref) / ref;
                ++points;
                if (!(rel <= worst)) {
                    worst = rel;
                    where = fmt("mu=%.2f sigma=%.2f elapsed=%.4g", mu, sigma, elapsed);
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 0.01 && elapsed < 60.0,
            fmt("%d points, 1e7 samples each, max rel dev %.2e at %s (tol 1e-2), %.1f s (limit 60 s)", points, worst,
                where.c_str(), elapsed)};
}

Verdict marcum() {
    test::Gen g(20240601);
    double worst = 0.0;
    bool bounded = true;
    for (int i = 0; i < 1000; ++i) {
        const double a = g.real(0.0, 5.0), b = g.real(0.0, 5.0);
        const double q = numerics::marcum_q1({a, b});
        bounded = bounded && q >= 0.0 && q <= 1.0;
        worst = std::max(worst, std::fabs(q - oracles::marcum_q1_quadrature(a, b)));
    }
    return {worst <= 1e-8 && bounded, fmt("1000 pairs in [0,5]^2, max abs dev %.2e (tol 1e-8)", worst)};
}

Verdict entropy() {
    using namespace metrics;
    bool ok = true;
    std::string detail;
    double worst_uniform = 0.0, worst_identity = 0.0;
    for (int k = 1; k <= 8; ++k) {
        std::vector<std::vector<double>> id(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(k), 0.0));
        for (int i = 0; i < k; ++i) id[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
        const std::vector<std::vector<double>> uni(static_cast<std::size_t>(k),
                                                   std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
        const std::vector<double> pi(static_cast<std::size_t>(k), 1.0 / k);
        worst_identity = std::max(worst_identity, std::fabs(chain_entropy(TransitionMatrix(id), pi)));
        worst_uniform = std::max(worst_uniform, std::fabs(chain_entropy(TransitionMatrix(uni), pi, LogBase::E) - std::log(k)));
        worst_uniform = std::max(worst_uniform, std::fabs(chain_entropy(TransitionMatrix(uni), pi, LogBase::Two) - std::log2(k)));
    }
    ok = ok && worst_identity == 0.0 && worst_uniform <= 1e-12;
    const oracles::Matrix p{{0.9, 0.1}, {0.5, 0.5}};
    const TransitionMatrix m(p);
    const double chain = chain_entropy(m, stationary_distribution(m));
    const double brute = oracles::chain_entropy_bruteforce(p, oracles::stationary_power_iteration(p), 2.0);
    ok = ok && std::fabs(chain - brute) <= 1e-10;
    const std::vector<double> u3{1.0 / 3, 1.0 / 3, 1.0 / 3};
    const double sym = symbol_entropy(SymbolDistribution(u3, u3, u3));
    ok = ok && sym == 3.0;
    detail = fmt("identity %.1e, uniform |H - log K| %.1e (tol 1e-12), two-state |dev| %.1e (tol 1e-10), uniform symbols %.17g (want 3)",
                 worst_identity, worst_uniform, std::fabs(chain - brute), sym);
    return {ok, detail};
}

Verdict mobility_stats() {
    using namespace mobility;
    MobilityParams p;
    p.lambda = 0.5;
    p.mean_speed = 10.0;
    p.speed_sigma = 1.0;
    p.max_speed = 1000.0;  // eleven-sigma headroom: the clamp never binds
    p.direction_sigma = 0.4;
    RandomStream rng(stream_seed(7, "probe", "mobility"));
    MobilityState s{{250.0, 250.0}, p.mean_speed, 0.0};
    const Arena arena{500.0, 500.0};
    const int n = 100000;
    double sum = 0.0;
    bool clamped = false;
    for (int k = 0; k < n; ++k) {
        s = integrate_position(gm_step(s, p, {rng.gaussian(), rng.gaussian()}), 1.0, arena);
        clamped = clamped || s.speed == 0.0 || s.speed == p.max_speed;
        sum += s.speed;
    }
    // AR(1) with stationary sd = speed_sigma: Var(mean) = s^2/n * (1+l)/(1-l).
    const double se = p.speed_sigma / std::sqrt(static_cast<double>(n)) * std::sqrt((1.0 + p.lambda) / (1.0 - p.lambda));
    const double z = (sum / n - p.mean_speed) / se;

    // lambda = 1: every step between wall contacts is exactly speed*dt along a fixed heading.
    MobilityParams straight = p;
    straight.lambda = 1.0;
    MobilityState w{{100.0, 60.0}, 23.0, 0.9};
    double worst = 0.0;
    int contacts = 0;
    for (int k = 0; k < 2000; ++k) {
        const auto next = integrate_position(gm_step(w, straight, {rng.gaussian(), rng.gaussian()}), 1.0, arena);
        if (next.direction == w.direction) {
            worst = std::max(worst, std::fabs(next.position.x - w.position.x - 23.0 * std::cos(w.direction)));
            worst = std::max(worst, std::fabs(next.position.y - w.position.y - 23.0 * std::sin(w.direction)));
        } else {
            ++contacts;
        }
        w = next;
    }
    const bool ok = std::fabs(z) <= 3.0 && !clamped && worst <= 1e-9 && contacts > 0 && w.speed == 23.0;
    return {ok, fmt("lambda=0.5 mean speed %.4f vs 10 (%.2f SE, tol 3), clamp bound: %s; lambda=1 max off-line %.1e m over %d contacts",
                    sum / n, z, clamped ? "yes" : "no", worst, contacts)};
}

ScenarioConfig random_workload(test::Gen& g, int index) {
    ScenarioConfig c;
    c.name = "fuzz-" + std::to_string(index);
    c.seed = g.next();
    c.duration = 30.0;
    c.arena = {g.real(60.0, 160.0), g.real(60.0, 160.0)};
    c.range = linkmodel::RangeClass(linkmodel::kRangeLabels[static_cast<std::size_t>(g.integer(0, 1))]);
    c.mobility.mean_speed = g.real(0.0, 12.0);
    c.mobility.speed_sigma = g.real(0.0, 4.0);
    c.mobility.max_speed = 30.0;
    c.mobility.lambda = g.unit();
    c.confirm_timeout = g.real(0.1, 3.0);
    c.accept_delay = c.confirm_timeout * g.real(0.05, 0.9);
    const int n = g.integer(2, 6);
    c.device_count = n;
    c.experiment.enabled = g.coin(0.3);
    c.experiment.interval = 5.0;
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        DeviceSpec d;
        d.id = "u" + std::to_string(i);
        d.uplink = g.coin(0.4);
        d.stationary = g.coin(0.2);
        d.net_config = g.coin(0.7) ? "m1" : "m2";
        ids.push_back(d.id);
        c.custom_devices.push_back(d);
    }
    const std::vector<std::string> actions{"register", "login", "start", "leave", "discover", "connect", "blacklist",
                                           "send", "stream", "session", "uplink", "relay"};
    const std::vector<std::string> types{"Text", "Image", "Voice", "Video"};
    const std::vector<std::string> nets{"m1", "m2"};
    // A prefix that usually brings devices up, then arbitrary noise.
    if (g.coin(0.8)) {
        for (const char* a : {"register", "login", "start"}) {
            WorkloadAction w;
            w.t = g.real(0.0, 2.0);
            w.action = a;
            w.device = "all";
            c.workload.push_back(w);
        }
    }
    const int count = g.integer(5, 40);
    for (int k = 0; k < count; ++k) {
        WorkloadAction w;
        w.t = g.real(0.0, c.duration);
        w.action = g.pick(actions);
        w.device = g.coin(0.1) ? "all" : g.pick(ids);
        w.target = g.pick(ids);
        w.channel = g.coin(0.2) ? "bluetooth" : "wifi";
        w.data_type = g.pick(types);
        w.size_bits = g.real(1e3, 2e7);
        w.until = w.t + g.real(0.0, 10.0);
        w.on = g.coin();
        w.password = g.coin(0.1) ? "guess" : "";
        w.net_config = g.coin(0.2) ? g.pick(nets) : "";
        w.src_manet = g.pick(nets);
        w.dst_manet = g.pick(nets);
        c.workload.push_back(w);
    }
    return c;
}

Verdict protocol() {
    test::Gen g(0xACCE55);
    int violating = 0;
    std::string first;
    long active = 0, relays = 0, blacklists = 0, timeouts = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto c = random_workload(g, i);
        const auto r = run(c);
        const auto v = audit_trace(r.trace);
        if (!v.empty()) {
            if (violating++ == 0) first = c.name + ": " + v.front();
        }
        for (const auto& l : parse_trace(r.trace)) {
            active += l.event == "conn_active";
            relays += l.event == "relay_delivered";
            blacklists += l.event == "blacklist";
            timeouts += l.event == "handshake_timeout";
        }
    }

    // The constructed range crossing: b leaves a's radius between request and confirm.
    ScenarioConfig c;
    c.name = "crossing";
    c.duration = 6.0;
    c.device_count = 2;
    c.mobility.lambda = 1.0;
    c.mobility.mean_speed = 20.0;
    c.mobility.max_speed = 40.0;
    c.mobility.speed_sigma = 0.0;
    c.mobility.direction_sigma = 0.0;
    c.custom_devices = {DeviceSpec{"a", false, 100.0, 100.0, 0.0, true, ""},
                        DeviceSpec{"b", false, 145.0, 100.0, 0.0, false, ""}};
    auto step = [](double t, const char* action, const char* device, const char* target = "") {
        WorkloadAction w;
        w.t = t;
        w.action = action;
        w.device = device;
        w.target = target;
        return w;
    };
    c.workload = {step(0.0, "register", "all"), step(0.1, "login", "all"), step(0.2, "start", "all"),
                  step(0.5, "discover", "a"), step(0.99, "connect", "a", "b")};
    const auto crossing = run(c);
    bool fired = false, activated = false;
    for (const auto& l : parse_trace(crossing.trace)) {
        fired = fired || (l.event == "handshake_timeout" && l.detail["error"] == "HandshakeTimeout");
        activated = activated || l.event == "conn_active";
    }
    const bool ok = violating == 0 && fired && !activated && audit_trace(crossing.trace).empty();
    return {ok, fmt("1000 generated workloads, %d with violations%s%s (exercised: %ld active links, %ld relays delivered, "
                    "%ld blacklists, %ld timeouts); range crossing -> HandshakeTimeout: %s",
                    violating, violating ? ", first: " : "", first.c_str(), active, relays, blacklists, timeouts,
                    fired && !activated ? "yes" : "no")};
}

Verdict determinism() {
    int same = 0;
    std::string mismatch;
    const auto names = preset_names();
    for (const auto& name : names) {
        const auto c = preset(name);
        const auto a = run(c);
        const auto b = run(c);
        if (a.digest == b.digest)
            ++same;
        else
            mismatch += " " + name;
    }
    return {same == static_cast<int>(names.size()),
            fmt("%d/%zu presets reproduce their trace digest%s%s", same, names.size(), mismatch.empty() ? "" : ", differ:",
                mismatch.c_str())};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"table3_throughput", table3},
        {"tables4_5_throughput", tables45},
        {"tables1_2_trend", tables12},
        {"session_life_oracle", session_life_grid},
        {"marcum_q_oracle", marcum},
        {"entropy_suite", entropy},
        {"mobility_statistics", mobility_stats},
        {"protocol_conformance", protocol},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
