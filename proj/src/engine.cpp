#include "cmanet/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "cmanet/cloud.hpp"
#include "cmanet/error.hpp"
#include "cmanet/event_queue.hpp"
#include "cmanet/middleware.hpp"

namespace cmanet {

namespace {

using linkmodel::DataType;
using middleware::Phase;

constexpr double kTimeSlack = 1e-9;

int band(double v, double extent) {
    const int b = static_cast<int>(std::floor(3.0 * v / extent));
    return std::clamp(b, 0, 2);
}

double interval_score(double epsilon_k, int connected, int delivered, double start, double end) {
    if (connected <= 0 || delivered <= 0) return 0.0;
    return metrics::transmission_index(metrics::TransmissionParams{epsilon_k, connected, delivered, {start, end}});
}

// Running totals shared by the live engine and the trace replay, so the two
// summaries differ only if the recorded events differ.
struct Tally {
    std::vector<std::vector<double>> transitions = std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0));
    std::array<double, 3> occupancy{};
    std::array<double, 3> xband{};
    std::array<double, 3> yband{};
    std::array<double, 4> bits{};
    std::array<double, 4> first_start;
    std::array<double, 4> last_end;
    std::vector<int> prev_state;
    std::vector<double> interval_scores;
    int delivered = 0;
    int failed = 0;
    int gateway_changes = 0;
    int relays_delivered = 0;
    int relays_failed = 0;
    int timeouts = 0;

    Tally() {
        first_start.fill(std::numeric_limits<double>::infinity());
        last_end.fill(-std::numeric_limits<double>::infinity());
    }

    void tick(std::span<const double> x, std::span<const double> y, std::span<const int> state, const mobility::Arena& arena) {
        for (std::size_t i = 0; i < state.size(); ++i) {
            const int s = state[i];
            if (i < prev_state.size()) transitions[static_cast<std::size_t>(prev_state[i])][static_cast<std::size_t>(s)] += 1.0;
            occupancy[static_cast<std::size_t>(s)] += 1.0;
            xband[static_cast<std::size_t>(band(x[i], arena.width))] += 1.0;
            yband[static_cast<std::size_t>(band(y[i], arena.height))] += 1.0;
        }
        prev_state.assign(state.begin(), state.end());
    }

    void transfer(DataType type, double delivered_bits, double start, double end, bool ok) {
        const auto k = static_cast<std::size_t>(type);
        bits[k] += delivered_bits;
        first_start[k] = std::min(first_start[k], start);
        last_end[k] = std::max(last_end[k], end);
        ok ? ++delivered : ++failed;
    }

    Summary finish(const ScenarioConfig& c) const {
        Summary s;
        for (std::size_t k = 0; k < 4; ++k) {
            const double window = last_end[k] - first_start[k];
            s.window_s[k] = window > 0.0 ? window : 0.0;
            s.throughput_mbps[k] = window > 0.0 ? bits[k] / window / 1e6 : 0.0;
        }
        s.interval_scores = interval_scores;
        if (!interval_scores.empty()) {
            double sum = 0.0;
            for (double v : interval_scores) sum += v;
            s.transmission_score = sum / static_cast<double>(interval_scores.size());
        }

        double n_trans = 0.0;
        for (const auto& row : transitions)
            for (double v : row) n_trans += v;
        if (n_trans > 0.0) {
            const auto m = metrics::TransitionMatrix::from_counts(transitions);
            std::vector<double> pi;
            if (m.irreducible()) {
                pi = metrics::stationary_distribution(m);
            } else {
                const double total = occupancy[0] + occupancy[1] + occupancy[2];
                for (double o : occupancy) pi.push_back(o / total);
            }
            s.chain_entropy_bits = metrics::chain_entropy(m, pi, metrics::LogBase::Two);
            s.chain_entropy_trits = metrics::chain_entropy(m, pi, metrics::LogBase::Three);
        }
        const double samples = occupancy[0] + occupancy[1] + occupancy[2];
        if (samples > 0.0) {
            auto norm = [samples](const std::array<double, 3>& a) {
                return std::vector<double>{a[0] / samples, a[1] / samples, a[2] / samples};
            };
            const metrics::SymbolDistribution dist(norm(xband), norm(yband), norm(occupancy));
            s.symbol_entropy_trits = metrics::symbol_entropy(dist, c.entropy_weight.value());
        }

        const auto devices = static_cast<int>(c.devices().size());
        s.connectivity_prob = linkmodel::connectivity_prob({devices, c.connectivity.sigma, c.connectivity.alpha});
        s.gateway_changes = gateway_changes;
        s.delivered = delivered;
        s.failed = failed;
        s.relays_delivered = relays_delivered;
        s.relays_failed = relays_failed;
        s.handshake_timeouts = timeouts;
        return s;
    }
};

class Simulation {
public:
    Simulation(const ScenarioConfig& config, const RunOptions& options)
        : config_(config),
          options_(options),
          kernels_(options.kernels != nullptr ? *options.kernels : simd::active_kernels()),
          specs_(config.devices()),
          n_(specs_.size()),
          registry_(ids()),
          cloud_(registry_, trace_,
                 cloud::CloudConfig{config.relay_latency, config.rates, config.range, config.overhead, config.lifetime}),
          mw_(registry_, cloud_, queue_, trace_,
              middleware::MiddlewareConfig{config.seed, config.range, config.rates, config.overhead, config.lifetime,
                                           config.accept_delay, config.confirm_timeout}) {
        place();
        mw_.set_positions(Snapshot{x_, y_});
    }

    RunResult run() {
        queue_.schedule(0.0, [this](double t) { tick(0, t); });
        for (const auto& a : config_.workload) queue_.schedule(a.t, [this, &a](double t) { apply(a, t); });
        if (config_.experiment.enabled) {
            if (config_.experiment.period <= config_.duration)
                queue_.schedule(config_.experiment.period, [this](double t) { traffic(1, t); });
            if (config_.experiment.interval <= config_.duration)
                queue_.schedule(config_.experiment.interval, [this](double t) { interval(1, t); });
        }
        queue_.run_until(config_.duration);

        for (const auto& rec : mw_.transfers()) {
            if (rec.status == metrics::TransferStatus::InFlight) continue;
            tally_.transfer(rec.type, rec.bits_delivered, rec.start, rec.end, rec.status == metrics::TransferStatus::Delivered);
        }
        for (const auto& [id, r] : cloud_.relays()) {
            if (r.status == cloud::RelayStatus::Delivered) ++tally_.relays_delivered;
            if (r.status == cloud::RelayStatus::Failed) ++tally_.relays_failed;
        }
        for (const auto& [id, c] : mw_.connections())
            if (c.failure == Errc::HandshakeTimeout) ++tally_.timeouts;
        tally_.gateway_changes = cloud_.gateway_changes();

        RunResult out;
        out.config = config_;
        out.summary = tally_.finish(config_);
        out.metrics = metric_rows(config_, out.summary);
        out.digest = trace_.sha256_hex();
        out.trace = trace_.bytes();
        out.kernels = std::string(kernels_.name);
        return out;
    }

private:
    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& d : specs_) out.push_back(d.id);
        return out;
    }

    void place() {
        x_.resize(n_);
        y_.resize(n_);
        speed_.resize(n_);
        dir_.resize(n_);
        cos_.resize(n_);
        sin_.resize(n_);
        noise_s_.resize(n_);
        noise_d_.resize(n_);
        lambda_.resize(n_);
        innovation_.resize(n_);
        mean_speed_.resize(n_);
        mean_dir_.resize(n_);
        speed_sigma_.resize(n_);
        dir_sigma_.resize(n_);
        max_speed_.resize(n_);
        state_.assign(n_, 0);

        const auto& m = config_.mobility;
        for (std::size_t i = 0; i < n_; ++i) {
            const DeviceSpec& d = specs_[i];
            RandomStream placement(stream_seed(config_.seed, d.id, "placement"));
            const double ux = placement.uniform();
            const double uy = placement.uniform();
            const double ud = placement.uniform();
            x_[i] = d.x.value_or(ux * config_.arena.width);
            y_[i] = d.y.value_or(uy * config_.arena.height);
            dir_[i] = mobility::wrap_angle(d.direction.value_or(ud * 2.0 * std::numbers::pi));
            rng_.emplace_back(stream_seed(config_.seed, d.id, "mobility"));

            if (d.stationary) {
                lambda_[i] = 1.0;
                mean_speed_[i] = 0.0;
                speed_sigma_[i] = 0.0;
                dir_sigma_[i] = 0.0;
                speed_[i] = 0.0;
            } else {
                lambda_[i] = m.lambda;
                mean_speed_[i] = m.mean_speed;
                speed_sigma_[i] = m.speed_sigma;
                dir_sigma_[i] = m.direction_sigma;
                speed_[i] = std::min(m.mean_speed, m.max_speed);
            }
            innovation_[i] = std::sqrt(1.0 - lambda_[i] * lambda_[i]);
            mean_dir_[i] = m.mean_direction;
            max_speed_[i] = m.max_speed;

            if (d.uplink) {
                registry_.device(i).uplink = true;
                registry_.device(i).uplink_since = 0.0;
            }
        }
    }

    void tick(std::uint64_t k, double t) {
        if (k > 0) {
            for (std::size_t i = 0; i < n_; ++i) {
                noise_s_[i] = rng_[i].gaussian();
                noise_d_[i] = rng_[i].gaussian();
                if (options_.tick_hook) options_.tick_hook(i, rng_[i]);
            }
            kernels_.gm_step(simd::GmStepBatch{speed_, dir_, lambda_, innovation_, mean_speed_, mean_dir_, speed_sigma_,
                                               dir_sigma_, max_speed_, noise_s_, noise_d_});
            simd::direction_cosines(dir_, cos_, sin_);
            kernels_.integrate(
                simd::IntegrateBatch{x_, y_, dir_, speed_, cos_, sin_, config_.dt, config_.arena.width, config_.arena.height});
            mw_.on_positions(t);
        }
        sample_states();
        tally_.tick(x_, y_, state_, config_.arena);
        trace_.emit(t, "tick", "", "",
                    Json{{"k", k}, {"x", x_}, {"y", y_}, {"speed", speed_}, {"dir", dir_}, {"state", state_}});

        const double next = static_cast<double>(k + 1) * config_.dt;
        if (next <= config_.duration + kTimeSlack) queue_.schedule(next, [this, k](double now) { tick(k + 1, now); });
    }

    void sample_states() {
        const double r = config_.range.radius();
        std::vector<double> dist_sq(n_);
        std::vector<std::uint8_t> within(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (mw_.phase(i) < Phase::ManetActive) {
                state_[i] = static_cast<int>(LinkState::Isolated);
                continue;
            }
            if (mw_.phase(i) == Phase::Connected) {
                state_[i] = static_cast<int>(LinkState::Connected);
                continue;
            }
            kernels_.range_query(simd::RangeQuery{x_[i], y_[i], x_, y_, r * r, dist_sq, within});
            const auto& manet = registry_.device(i).manet;
            bool near = false;
            for (std::size_t j = 0; j < n_ && !near; ++j)
                near = j != i && within[j] != 0 && mw_.phase(j) >= Phase::ManetActive && registry_.device(j).manet == manet;
            state_[i] = static_cast<int>(near ? LinkState::InRange : LinkState::Isolated);
        }
    }

    template <typename Fn>
    void guarded(const std::string& action, const std::string& device, double t, Fn&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            trace_.emit(t, "error", device, "",
                        Json{{"action", action}, {"code", to_string(e.code())}, {"message", e.what()}});
        }
    }

    void apply(const WorkloadAction& a, double t) {
        if (a.action == "relay") {
            guarded(a.action, "", t, [&] {
                mw_.relay(a.src_manet, a.dst_manet, *linkmodel::parse_data_type(a.data_type), a.size_bits, t);
            });
            return;
        }
        std::vector<DeviceIndex> targets;
        if (a.device == "all") {
            for (DeviceIndex i = 0; i < n_; ++i) targets.push_back(i);
        } else {
            targets.push_back(mw_.index_of(a.device));
        }
        for (DeviceIndex i : targets) guarded(a.action, specs_[i].id, t, [&] { apply_one(a, i, t); });
    }

    void apply_one(const WorkloadAction& a, DeviceIndex i, double t) {
        const std::string& act = a.action;
        if (act == "register") {
            mw_.register_device(i, t);
        } else if (act == "login") {
            mw_.login(i, a.password.empty() ? mw_.device(i).credential : a.password, t);
        } else if (act == "start") {
            mw_.start_manet(i, a.net_config.empty() ? specs_[i].net_config : a.net_config, t);
        } else if (act == "leave") {
            mw_.leave_manet(i, t);
        } else if (act == "discover") {
            mw_.discover(i, linkmodel::parse_channel(a.channel).value_or(linkmodel::Channel::WiFi), t);
        } else if (act == "connect") {
            mw_.connect(i, a.target, t);
        } else if (act == "blacklist") {
            mw_.blacklist(i, a.target, t);
        } else if (act == "send") {
            mw_.send(open_link(i, a.target), i, *linkmodel::parse_data_type(a.data_type), a.size_bits, t);
        } else if (act == "stream") {
            stream_chunk(i, a.target, *linkmodel::parse_data_type(a.data_type), a.size_bits, a.until, t);
        } else if (act == "session") {
            mw_.request_session(i, t);
        } else if (act == "uplink") {
            mw_.set_uplink(i, a.on, t);
        }
    }

    std::uint64_t open_link(DeviceIndex i, const std::string& target) {
        const auto link = mw_.link_between(i, mw_.index_of(target));
        if (!link || mw_.connection(*link).state != middleware::ConnState::Active)
            throw Error(Errc::ConnectionClosed, "no active connection from " + specs_[i].id + " to " + target);
        return *link;
    }

    void stream_chunk(DeviceIndex i, const std::string& target, DataType type, double bits, double until, double t) {
        const std::uint64_t tid = mw_.send(open_link(i, target), i, type, bits, t);
        const double end = mw_.transfer(tid).end;
        if (end < until) {
            queue_.schedule(end, [this, i, target, type, bits, until](double now) {
                guarded("stream", specs_[i].id, now, [&] { stream_chunk(i, target, type, bits, until, now); });
            });
        }
    }

    void traffic(std::uint64_t m, double t) {
        const auto& ex = config_.experiment;
        for (DeviceIndex i = 0; i < n_; ++i) {
            if (mw_.phase(i) < Phase::ManetActive) continue;
            const auto active = mw_.active_connections(i);
            if (!active.empty()) {
                if (!mw_.busy(active.front(), t))
                    guarded("traffic", specs_[i].id, t, [&] { mw_.send(active.front(), i, ex.data_type, ex.message_bits, t); });
                continue;
            }
            if (mw_.has_pending(i)) continue;
            guarded("traffic", specs_[i].id, t, [&] { pick_and_connect(i, t); });
        }
        const double next = static_cast<double>(m + 1) * ex.period;
        if (next <= config_.duration + kTimeSlack) queue_.schedule(next, [this, m](double now) { traffic(m + 1, now); });
    }

    void pick_and_connect(DeviceIndex i, double t) {
        const auto found = mw_.discover(i, linkmodel::Channel::WiFi, t);
        std::vector<cloud::ConnectionCandidate> candidates;
        const double life = linkmodel::session_life(linkmodel::LinkLifetime{config_.lifetime, 0.0});
        for (const auto& nb : found.neighbors) {
            if (mw_.link_between(i, mw_.index_of(nb.id))) continue;
            const auto cls = linkmodel::RangeClass::covering(nb.distance).value_or(config_.range);
            candidates.push_back({nb.id, life, config_.rates.mbps(config_.experiment.data_type, cls)});
        }
        if (candidates.empty()) return;
        mw_.connect(i, cloud::select_best_connection(specs_[i].id, candidates), t);
    }

    void interval(std::uint64_t m, double t) {
        const auto& ex = config_.experiment;
        int connected = 0;
        for (DeviceIndex i = 0; i < n_; ++i)
            if (mw_.phase(i) == Phase::Connected) ++connected;
        int delivered_total = 0;
        for (const auto& rec : mw_.transfers())
            if (rec.status == metrics::TransferStatus::Delivered) ++delivered_total;
        const int delivered = delivered_total - delivered_before_;
        delivered_before_ = delivered_total;

        const double start = static_cast<double>(m - 1) * ex.interval;
        const double score = interval_score(ex.epsilon_k, connected, delivered, start, t);
        tally_.interval_scores.push_back(score);
        trace_.emit(t, "interval", "", "",
                    Json{{"start", start}, {"end", t}, {"connected", connected}, {"delivered", delivered}, {"score", score}});
        const double next = static_cast<double>(m + 1) * ex.interval;
        if (next <= config_.duration + kTimeSlack) queue_.schedule(next, [this, m](double now) { interval(m + 1, now); });
    }

    const ScenarioConfig& config_;
    const RunOptions& options_;
    const simd::KernelTable& kernels_;
    std::vector<DeviceSpec> specs_;
    std::size_t n_;
    Trace trace_;
    EventQueue queue_;
    ManetRegistry registry_;
    cloud::Cloud cloud_;
    middleware::Middleware mw_;

    std::vector<double> x_, y_, speed_, dir_, cos_, sin_, noise_s_, noise_d_;
    std::vector<double> lambda_, innovation_, mean_speed_, mean_dir_, speed_sigma_, dir_sigma_, max_speed_;
    std::vector<int> state_;
    std::vector<RandomStream> rng_;
    Tally tally_;
    int delivered_before_ = 0;
};

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

RunResult run(const ScenarioConfig& config, const RunOptions& options) {
    config.validate();
    Simulation sim(config, options);
    return sim.run();
}

Summary summarize_trace(std::string_view trace, const ScenarioConfig& config) {
    Tally tally;
    const auto lines = parse_trace(trace);
    std::map<std::string, Phase> phases;
    int delivered_since_interval = 0;
    for (const auto& line : lines) {
        const auto& d = line.detail;
        if (line.event == "tick") {
            const auto x = d.at("x").get<std::vector<double>>();
            const auto y = d.at("y").get<std::vector<double>>();
            const auto s = d.at("state").get<std::vector<int>>();
            tally.tick(x, y, s, config.arena);
        } else if (line.event == "delivered" || line.event == "transfer_failed") {
            const auto type = linkmodel::parse_data_type(d.at("type").get<std::string>());
            if (!type) throw ValidationError({"trace: unknown data type in " + line.event});
            const bool ok = line.event == "delivered";
            tally.transfer(*type, d.at("bits").get<double>(), d.at("start").get<double>(), d.at("end").get<double>(), ok);
            if (ok) ++delivered_since_interval;
        } else if (line.event == "phase") {
            phases[line.src] = middleware::parse_phase(d.at("to").get<std::string>()).value_or(Phase::Installed);
        } else if (line.event == "interval") {
            int connected = 0;
            for (const auto& [id, p] : phases)
                if (p == Phase::Connected) ++connected;
            tally.interval_scores.push_back(interval_score(config.experiment.epsilon_k, connected, delivered_since_interval,
                                                           d.at("start").get<double>(), d.at("end").get<double>()));
            delivered_since_interval = 0;
        } else if (line.event == "gateway") {
            ++tally.gateway_changes;
        } else if (line.event == "relay_delivered") {
            ++tally.relays_delivered;
        } else if (line.event == "relay_failed") {
            ++tally.relays_failed;
        } else if (line.event == "handshake_timeout") {
            ++tally.timeouts;
        }
    }
    return tally.finish(config);
}

std::vector<std::string> audit_trace(std::string_view trace) {
    std::vector<std::string> out;
    const auto lines = parse_trace(trace);
    std::map<std::string, Phase> phases;
    std::set<std::pair<std::string, std::string>> blacklisted;
    std::map<std::uint64_t, double> requested_at;
    std::map<std::uint64_t, std::pair<std::string, std::string>> active;
    std::map<std::string, std::string> gateway_of;  // manet -> device ("" when none)
    double last_t = -std::numeric_limits<double>::infinity();

    auto where = [](const TraceLine& l) { return "t=" + fmt_double(l.t) + " " + l.event + ": "; };
    for (const auto& l : lines) {
        const auto& d = l.detail;
        if (l.t < last_t) out.push_back(where(l) + "clock went backwards");
        last_t = l.t;

        if (l.event == "phase") {
            const auto from = middleware::parse_phase(d.at("from").get<std::string>());
            const auto to = middleware::parse_phase(d.at("to").get<std::string>());
            const Phase current = phases.count(l.src) ? phases[l.src] : Phase::Installed;
            if (!from || !to) {
                out.push_back(where(l) + "unknown phase name");
                continue;
            }
            if (*from != current) out.push_back(where(l) + l.src + " left a phase it was not in");
            if (!middleware::phase_step_allowed(*from, *to))
                out.push_back(where(l) + l.src + " stepped " + std::string(to_string(*from)) + " -> " +
                              std::string(to_string(*to)));
            phases[l.src] = *to;
        } else if (l.event == "blacklist") {
            blacklisted.insert({l.src, l.dst});
        } else if (l.event == "connect_request") {
            requested_at[d.at("conn").get<std::uint64_t>()] = l.t;
        } else if (l.event == "conn_active") {
            const auto id = d.at("conn").get<std::uint64_t>();
            if (!requested_at.count(id)) out.push_back(where(l) + "connection became active without a request");
            if (blacklisted.count({l.src, l.dst}) || blacklisted.count({l.dst, l.src}))
                out.push_back(where(l) + "active connection between blacklisted " + l.src + " and " + l.dst);
            if (d.at("distance").get<double>() > d.at("radius").get<double>())
                out.push_back(where(l) + "endpoints out of range at confirmation");
            active[id] = {l.src, l.dst};
        } else if (l.event == "conn_closed" || l.event == "handshake_timeout") {
            active.erase(d.at("conn").get<std::uint64_t>());
        } else if (l.event == "gateway") {
            gateway_of[d.at("manet").get<std::string>()] = d.at("uplink").get<bool>() ? l.src : "";
        } else if (l.event == "relay_delivered") {
            const auto src = gateway_of[d.at("src_manet").get<std::string>()];
            const auto dst = gateway_of[d.at("dst_manet").get<std::string>()];
            if (src.empty() || dst.empty()) out.push_back(where(l) + "relay delivered without gateways on both sides");
            if (dst != l.dst) out.push_back(where(l) + "relay delivered to a device that is not the gateway");
        } else if (l.event == "tick") {
            for (const auto& [id, ends] : active)
                if (blacklisted.count(ends) || blacklisted.count({ends.second, ends.first}))
                    out.push_back(where(l) + "connection " + std::to_string(id) + " survived a blacklist");
        }
    }
    return out;
}

std::vector<MetricRow> metric_rows(const ScenarioConfig& c, const Summary& s) {
    const double eps = c.experiment.epsilon_k;
    const int n = static_cast<int>(c.devices().size());
    std::vector<MetricRow> rows;
    auto add = [&](std::string metric, double value) { rows.push_back(MetricRow{std::move(metric), c.name, eps, n, value}); };
    for (DataType t : linkmodel::kDataTypes)
        add("throughput_" + std::string(linkmodel::to_string(t)) + "_Mbps", s.throughput_mbps[static_cast<std::size_t>(t)]);
    add("transmission_score_dimensionless", s.transmission_score);
    add("chain_entropy_bits", s.chain_entropy_bits);
    add("chain_entropy_trits", s.chain_entropy_trits);
    add("symbol_entropy_trits", s.symbol_entropy_trits);
    add("connectivity_prob", s.connectivity_prob);
    add("gateway_changes_count", s.gateway_changes);
    add("delivered_count", s.delivered);
    add("failed_count", s.failed);
    add("relays_delivered_count", s.relays_delivered);
    add("relays_failed_count", s.relays_failed);
    add("handshake_timeouts_count", s.handshake_timeouts);
    return rows;
}

std::string metrics_csv(const std::vector<MetricRow>& rows, bool header) {
    std::string out = header ? "metric,scenario,epsilon_k,devices,value\n" : "";
    for (const auto& r : rows)
        out += r.metric + "," + r.scenario + "," + fmt_double(r.epsilon_k) + "," + std::to_string(r.devices) + "," +
               fmt_double(r.value) + "\n";
    return out;
}

std::vector<MetricRow> parse_metrics_csv(std::string_view text) {
    std::vector<MetricRow> rows;
    std::vector<std::string> problems;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto number = [](const std::string& s, double& out) {
        const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        return res.ec == std::errc{} && res.ptr == s.data() + s.size();
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (line_no == 1) {
            if (line != "metric,scenario,epsilon_k,devices,value") problems.push_back("bad metrics header");
            continue;
        }
        if (f.size() != 5) {
            problems.push_back("line " + std::to_string(line_no) + ": expected 5 fields");
            continue;
        }
        MetricRow r{f[0], f[1], 0.0, 0, 0.0};
        double devices = 0.0;
        if (!number(f[2], r.epsilon_k) || !number(f[3], devices) || !number(f[4], r.value)) {
            problems.push_back("line " + std::to_string(line_no) + ": non-numeric field");
            continue;
        }
        r.devices = static_cast<int>(devices);
        rows.push_back(std::move(r));
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return rows;
}

Json summary_json(const Summary& s) {
    Json throughput = Json::object();
    Json windows = Json::object();
    for (DataType t : linkmodel::kDataTypes) {
        throughput[std::string(linkmodel::to_string(t))] = s.throughput_mbps[static_cast<std::size_t>(t)];
        windows[std::string(linkmodel::to_string(t))] = s.window_s[static_cast<std::size_t>(t)];
    }
    return Json{{"throughput_Mbps", throughput},
                {"window_s", windows},
                {"transmission_score", s.transmission_score},
                {"interval_scores", s.interval_scores},
                {"chain_entropy_bits", s.chain_entropy_bits},
                {"chain_entropy_trits", s.chain_entropy_trits},
                {"symbol_entropy_trits", s.symbol_entropy_trits},
                {"connectivity_prob", s.connectivity_prob},
                {"gateway_changes", s.gateway_changes},
                {"delivered", s.delivered},
                {"failed", s.failed},
                {"relays_delivered", s.relays_delivered},
                {"relays_failed", s.relays_failed},
                {"handshake_timeouts", s.handshake_timeouts}};
}

void write_artifacts(const RunResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error(Errc::Io, "cannot write " + (dir / name).string());
        out << body;
        if (!out) throw Error(Errc::Io, "short write to " + (dir / name).string());
    };
    write("trace.jsonl", result.trace);
    write("metrics.csv", metrics_csv(result.metrics));
    Json summary = summary_json(result.summary);
    summary["scenario"] = result.config.name;
    summary["seed"] = result.config.seed;
    summary["trace_sha256"] = result.digest;
    write("summary.json", summary.dump(2) + "\n");
}

}  // namespace cmanet
