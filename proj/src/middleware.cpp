#include "cmanet/middleware.hpp"

#include <algorithm>
#include <cmath>

#include "cmanet/simd/kernels.hpp"

namespace cmanet::middleware {

namespace {

constexpr std::string_view kPhaseNames[] = {"Installed", "Registered", "LoggedIn", "ManetActive", "Connected"};

}  // namespace

std::string_view to_string(Phase p) { return kPhaseNames[static_cast<int>(p)]; }

std::optional<Phase> parse_phase(std::string_view s) {
    for (int i = 0; i < 5; ++i)
        if (kPhaseNames[i] == s) return static_cast<Phase>(i);
    return std::nullopt;
}

bool phase_step_allowed(Phase from, Phase to) {
    switch (from) {
        case Phase::Installed: return to == Phase::Registered;
        case Phase::Registered: return to == Phase::LoggedIn;
        case Phase::LoggedIn: return to == Phase::ManetActive;
        case Phase::ManetActive: return to == Phase::Connected || to == Phase::LoggedIn;
        case Phase::Connected: return to == Phase::ManetActive || to == Phase::LoggedIn;
    }
    return false;
}

std::string_view to_string(ConnState s) {
    switch (s) {
        case ConnState::Requested: return "Requested";
        case ConnState::Confirmed: return "Confirmed";
        case ConnState::Active: return "Active";
        case ConnState::Closed: return "Closed";
    }
    return "?";
}

Middleware::Middleware(ManetRegistry& registry, cloud::Cloud& cloud, EventQueue& queue, Trace& trace,
                       MiddlewareConfig config)
    : registry_(registry), cloud_(cloud), queue_(queue), trace_(trace), config_(std::move(config)) {
    devices_.reserve(registry_.size());
    for (DeviceIndex i = 0; i < registry_.size(); ++i) {
        DeviceState d;
        d.id = registry_.device(i).id;
        devices_.push_back(std::move(d));
    }
    open_by_device_.resize(devices_.size());
}

DeviceIndex Middleware::index_of(std::string_view id) const {
    const auto i = registry_.find(id);
    if (!i) throw Error(Errc::InvalidArgument, "unknown device " + std::string(id));
    return *i;
}

void Middleware::set_phase(DeviceIndex i, Phase to, double t) {
    DeviceState& d = devices_.at(i);
    if (d.phase == to) return;
    trace_.emit(t, "phase", d.id, "", Json{{"from", to_string(d.phase)}, {"to", to_string(to)}});
    d.phase = to;
}

void Middleware::require_phase_at_least(DeviceIndex i, Phase p, std::string_view op) const {
    const DeviceState& d = devices_.at(i);
    if (d.phase < p)
        throw Error(Errc::OrderViolation, std::string(op) + " needs " + std::string(to_string(p)) + ", " + d.id +
                                              " is " + std::string(to_string(d.phase)));
}

std::string Middleware::register_device(DeviceIndex i, double t) {
    DeviceState& d = devices_.at(i);
    if (cloud_.is_registered(d.id)) throw Error(Errc::DuplicateId, "device " + d.id + " is already registered");
    if (d.phase != Phase::Installed) throw Error(Errc::OrderViolation, "register from " + std::string(to_string(d.phase)));
    const std::string credential = sha256_hex(std::to_string(config_.seed) + ":credential:" + d.id).substr(0, 32);
    cloud_.register_device(d.id, credential, t);
    d.credential = credential;
    set_phase(i, Phase::Registered, t);
    return credential;
}

std::string Middleware::login(DeviceIndex i, std::string_view password, double t) {
    DeviceState& d = devices_.at(i);
    if (d.phase == Phase::Installed) throw Error(Errc::NotRegistered, "device " + d.id + " is not registered");
    if (d.phase != Phase::Registered) throw Error(Errc::OrderViolation, d.id + " is already logged in");
    d.token = cloud_.authenticate(d.id, password, t);
    set_phase(i, Phase::LoggedIn, t);
    return d.token;
}

void Middleware::start_manet(DeviceIndex i, const std::string& net_config, double t) {
    if (net_config.empty()) throw Error(Errc::ConfigMissing, "no network configuration for " + devices_.at(i).id);
    if (devices_.at(i).phase != Phase::LoggedIn)
        throw Error(Errc::OrderViolation, "start MANET from " + std::string(to_string(devices_.at(i).phase)));
    registry_.join(i, net_config);
    trace_.emit(t, "manet_join", devices_[i].id, "", Json{{"manet", net_config}});
    set_phase(i, Phase::ManetActive, t);
    cloud_.reelect(net_config, t);
}

void Middleware::leave_manet(DeviceIndex i, double t) {
    require_phase_at_least(i, Phase::ManetActive, "leave");
    const std::set<std::uint64_t> open = open_by_device_[i];
    for (std::uint64_t id : open) close(connections_.at(id), t, "left", Errc::ConnectionClosed);
    const std::string manet = registry_.device(i).manet.value_or("");
    registry_.leave(i);
    discoveries_.erase(i);
    trace_.emit(t, "manet_leave", devices_[i].id, "", Json{{"manet", manet}});
    set_phase(i, Phase::LoggedIn, t);
    cloud_.reelect(manet, t);
}

double Middleware::channel_radius(linkmodel::Channel channel) const {
    return channel == linkmodel::Channel::Bluetooth ? linkmodel::kBluetoothRadius : config_.range.radius();
}

double Middleware::distance(DeviceIndex a, DeviceIndex b) const {
    const double dx = positions_.x[a] - positions_.x[b];
    const double dy = positions_.y[a] - positions_.y[b];
    return std::sqrt(dx * dx + dy * dy);
}

DiscoveryResult Middleware::discover(DeviceIndex i, linkmodel::Channel channel, double t) {
    require_phase_at_least(i, Phase::ManetActive, "discover");
    const std::size_t n = devices_.size();
    const double r = channel_radius(channel);
    std::vector<double> dist_sq(n);
    std::vector<std::uint8_t> within(n);
    simd::active_kernels().range_query(simd::RangeQuery{positions_.x[i], positions_.y[i], positions_.x.first(n),
                                                        positions_.y.first(n), r * r, dist_sq, within});

    const auto& own_manet = registry_.device(i).manet;
    const auto& bl = devices_[i].blacklist;
    DiscoveryResult result{{}, channel};
    for (DeviceIndex j = 0; j < n; ++j) {
        if (j == i || within[j] == 0) continue;
        if (devices_[j].phase < Phase::ManetActive || registry_.device(j).manet != own_manet) continue;
        if (bl.count(devices_[j].id) != 0) continue;
        result.neighbors.push_back(Neighbor{devices_[j].id, std::sqrt(dist_sq[j])});
    }
    std::sort(result.neighbors.begin(), result.neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    });

    Json ids = Json::array();
    for (const auto& nb : result.neighbors) ids.push_back(nb.id);
    trace_.emit(t, "discover", devices_[i].id, "", Json{{"channel", linkmodel::to_string(channel)}, {"neighbors", ids}});
    discoveries_[i] = result;
    return result;
}

const DiscoveryResult* Middleware::last_discovery(DeviceIndex i) const {
    const auto it = discoveries_.find(i);
    return it == discoveries_.end() ? nullptr : &it->second;
}

void Middleware::blacklist(DeviceIndex i, const std::string& other, double t) {
    DeviceState& d = devices_.at(i);
    if (other == d.id) throw Error(Errc::InvalidArgument, "a device cannot blacklist itself");
    const DeviceIndex j = index_of(other);
    d.blacklist.insert(other);
    trace_.emit(t, "blacklist", d.id, other);
    if (const auto id = link_between(i, j)) close(connections_.at(*id), t, "blacklisted", Errc::Refused);
}

bool Middleware::blacklisted_pair(DeviceIndex a, DeviceIndex b) const {
    return devices_[a].blacklist.count(devices_[b].id) != 0 || devices_[b].blacklist.count(devices_[a].id) != 0;
}

std::optional<std::uint64_t> Middleware::link_between(DeviceIndex a, DeviceIndex b) const {
    for (std::uint64_t id : open_by_device_.at(a))
        if (connections_.at(id).peer_of(a) == b) return id;
    return std::nullopt;
}

std::vector<std::uint64_t> Middleware::active_connections(DeviceIndex i) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t id : open_by_device_.at(i))
        if (connections_.at(id).state == ConnState::Active) out.push_back(id);
    return out;
}

bool Middleware::has_pending(DeviceIndex i) const {
    return std::any_of(open_by_device_.at(i).begin(), open_by_device_.at(i).end(),
                       [&](std::uint64_t id) { return connections_.at(id).state == ConnState::Requested; });
}

std::uint64_t Middleware::connect(DeviceIndex initiator, const std::string& target, double t) {
    const DeviceState& a = devices_.at(initiator);
    if (target == a.id) throw Error(Errc::InvalidArgument, "self-connect rejected for " + a.id);
    const DeviceIndex b = index_of(target);
    require_phase_at_least(initiator, Phase::ManetActive, "connect");
    if (blacklisted_pair(initiator, b)) {
        trace_.emit(t, "connect_refused", a.id, target);
        throw Error(Errc::Refused, a.id + " and " + target + " are blacklisted");
    }
    const DiscoveryResult* seen = last_discovery(initiator);
    const bool discovered = seen != nullptr && std::any_of(seen->neighbors.begin(), seen->neighbors.end(),
                                                           [&](const Neighbor& n) { return n.id == target; });
    if (!discovered) throw Error(Errc::NotDiscovered, target + " is not in the latest discovery of " + a.id);
    require_phase_at_least(b, Phase::ManetActive, "connect");
    if (const auto existing = link_between(initiator, b)) return *existing;

    Connection conn;
    conn.id = next_conn_++;
    conn.initiator = initiator;
    conn.target = b;
    conn.channel = seen->channel;
    conn.requested_at = t;
    connections_[conn.id] = conn;
    open_.insert(conn.id);
    open_by_device_[initiator].insert(conn.id);
    open_by_device_[b].insert(conn.id);
    trace_.emit(t, "connect_request", a.id, target,
                Json{{"conn", conn.id}, {"channel", linkmodel::to_string(conn.channel)}});
    const std::uint64_t id = conn.id;
    queue_.schedule(t + config_.accept_delay, [this, id](double now) { confirm(id, now); });
    queue_.schedule(t + config_.confirm_timeout, [this, id](double now) { timeout(id, now); });
    return id;
}

void Middleware::confirm(std::uint64_t conn_id, double t) {
    Connection& conn = connections_.at(conn_id);
    if (conn.state != ConnState::Requested) return;
    const DeviceState& a = devices_[conn.initiator];
    const DeviceState& b = devices_[conn.target];
    if (a.phase < Phase::ManetActive || b.phase < Phase::ManetActive ||
        registry_.device(conn.initiator).manet != registry_.device(conn.target).manet) {
        close(conn, t, "peer unavailable", Errc::Refused);
        return;
    }
    if (blacklisted_pair(conn.initiator, conn.target)) {
        close(conn, t, "blacklisted", Errc::Refused);
        return;
    }
    const double d = distance(conn.initiator, conn.target);
    const double r = channel_radius(conn.channel);
    if (!linkmodel::link_exists(positions_.at(conn.initiator), positions_.at(conn.target), r)) {
        // The request never reaches the target; the timeout closes it.
        trace_.emit(t, "confirm_missed", b.id, a.id, Json{{"conn", conn.id}, {"distance", d}});
        return;
    }
    conn.state = ConnState::Confirmed;
    trace_.emit(t, "conn_confirmed", b.id, a.id, Json{{"conn", conn.id}});
    conn.state = ConnState::Active;
    conn.established_at = t;
    conn.busy_until = t;
    trace_.emit(t, "conn_active", a.id, b.id,
                Json{{"conn", conn.id}, {"distance", d}, {"radius", r}, {"channel", linkmodel::to_string(conn.channel)}});
    refresh_connected_phase(conn.initiator, t);
    refresh_connected_phase(conn.target, t);
}

void Middleware::timeout(std::uint64_t conn_id, double t) {
    Connection& conn = connections_.at(conn_id);
    if (conn.state != ConnState::Requested) return;
    close(conn, t, "handshake timeout", Errc::HandshakeTimeout);
}

void Middleware::close(Connection& conn, double t, std::string_view reason, std::optional<Errc> failure) {
    if (conn.state == ConnState::Closed) return;
    const bool was_active = conn.state == ConnState::Active;
    conn.state = ConnState::Closed;
    conn.closed_at = t;
    conn.failure = failure;
    conn.close_reason = std::string(reason);
    open_.erase(conn.id);
    open_by_device_[conn.initiator].erase(conn.id);
    open_by_device_[conn.target].erase(conn.id);

    if (const auto it = in_flight_.find(conn.id); it != in_flight_.end()) {
        for (std::uint64_t tid : it->second) {
            metrics::TransferRecord& rec = transfers_[tid - 1];
            if (rec.status != metrics::TransferStatus::InFlight) continue;
            const double planned = rec.end - rec.start;
            const double fraction = planned > 0.0 ? std::clamp((t - rec.start) / planned, 0.0, 1.0) : 0.0;
            rec.bits_delivered = rec.size_bits * fraction;
            rec.status = metrics::TransferStatus::Failed;
            rec.end = std::max(t, rec.start);
            trace_.emit(t, "transfer_failed", rec.src, rec.dst,
                        Json{{"transfer", rec.id}, {"type", linkmodel::to_string(rec.type)}, {"bits", rec.bits_delivered},
                             {"size", rec.size_bits}, {"start", rec.start}, {"end", rec.end}});
        }
        in_flight_.erase(it);
    }

    Json detail{{"conn", conn.id}, {"reason", reason}};
    if (failure) detail["error"] = to_string(*failure);
    trace_.emit(t, failure == Errc::HandshakeTimeout ? "handshake_timeout" : "conn_closed", devices_[conn.initiator].id,
                devices_[conn.target].id, std::move(detail));
    if (was_active) {
        refresh_connected_phase(conn.initiator, t);
        refresh_connected_phase(conn.target, t);
    }
}

void Middleware::refresh_connected_phase(DeviceIndex i, double t) {
    const Phase p = devices_[i].phase;
    if (p < Phase::ManetActive) return;
    const bool any = !active_connections(i).empty();
    if (any && p == Phase::ManetActive) set_phase(i, Phase::Connected, t);
    if (!any && p == Phase::Connected) set_phase(i, Phase::ManetActive, t);
}

double Middleware::link_rate(const Connection& conn, linkmodel::DataType type) const {
    if (conn.channel == linkmodel::Channel::Bluetooth) {
        if (type != linkmodel::DataType::Text)
            throw Error(Errc::InvalidArgument, "the Bluetooth channel carries Text only");
        return linkmodel::kBluetoothTextMbps;
    }
    const auto cls = linkmodel::RangeClass::covering(distance(conn.initiator, conn.target)).value_or(config_.range);
    return config_.rates.mbps(type, cls);
}

std::uint64_t Middleware::send(std::uint64_t conn_id, DeviceIndex sender, linkmodel::DataType type, double size_bits,
                               double t) {
    const auto it = connections_.find(conn_id);
    if (it == connections_.end() || it->second.state != ConnState::Active)
        throw Error(Errc::ConnectionClosed, "connection " + std::to_string(conn_id) + " is not active");
    Connection& conn = it->second;
    if (!conn.involves(sender)) throw Error(Errc::InvalidArgument, devices_.at(sender).id + " is not an endpoint");
    if (!(size_bits > 0.0)) throw Error(Errc::InvalidArgument, "payload must be non-empty");
    if (!linkmodel::link_exists(positions_.at(conn.initiator), positions_.at(conn.target), channel_radius(conn.channel))) {
        close(conn, t, "link down", Errc::LinkDown);
        throw Error(Errc::LinkDown, "link " + std::to_string(conn_id) + " is out of range");
    }
    const double rate = link_rate(conn, type);

    metrics::TransferRecord rec;
    rec.id = transfers_.size() + 1;
    rec.src = devices_[sender].id;
    rec.dst = devices_[conn.peer_of(sender)].id;
    rec.type = type;
    rec.size_bits = size_bits;
    rec.start = std::max(t, conn.busy_until);  // transfers on one link run back to back
    rec.end = rec.start + linkmodel::transfer_duration_at(size_bits, rate, config_.overhead);
    conn.busy_until = rec.end;
    transfers_.push_back(rec);
    in_flight_[conn.id].push_back(rec.id);
    trace_.emit(t, "send", rec.src, rec.dst,
                Json{{"transfer", rec.id}, {"conn", conn.id}, {"type", linkmodel::to_string(type)}, {"size", size_bits},
                     {"mbps", rate}, {"start", rec.start}, {"end", rec.end}});
    const std::uint64_t tid = rec.id;
    queue_.schedule(rec.end, [this, tid](double now) { complete_transfer(tid, now); });
    return tid;
}

void Middleware::complete_transfer(std::uint64_t transfer_id, double t) {
    metrics::TransferRecord& rec = transfers_.at(transfer_id - 1);
    if (rec.status != metrics::TransferStatus::InFlight) return;
    rec.status = metrics::TransferStatus::Delivered;
    rec.bits_delivered = rec.size_bits;
    rec.end = t;
    trace_.emit(t, "delivered", rec.src, rec.dst,
                Json{{"transfer", rec.id}, {"type", linkmodel::to_string(rec.type)}, {"bits", rec.bits_delivered},
                     {"start", rec.start}, {"end", rec.end}});
    for (auto& [cid, ids] : in_flight_) {
        const auto pos = std::find(ids.begin(), ids.end(), transfer_id);
        if (pos != ids.end()) {
            ids.erase(pos);
            break;
        }
    }
}

void Middleware::on_positions(double t) {
    const std::set<std::uint64_t> open = open_;
    for (std::uint64_t id : open) {
        Connection& conn = connections_.at(id);
        if (conn.state != ConnState::Active) continue;
        if (!linkmodel::link_exists(positions_.at(conn.initiator), positions_.at(conn.target), channel_radius(conn.channel)))
            close(conn, t, "link down", Errc::LinkDown);
    }
}

cloud::SessionGrant Middleware::request_session(DeviceIndex i, double t) {
    require_phase_at_least(i, Phase::LoggedIn, "session");
    return cloud_.open_session(devices_[i].token, t);
}

void Middleware::set_uplink(DeviceIndex i, bool on, double t) {
    DeviceRecord& rec = registry_.device(i);
    if (rec.uplink == on) return;
    rec.uplink = on;
    if (on) rec.uplink_since = t;
    trace_.emit(t, "uplink", rec.id, "", Json{{"on", on}});
    if (rec.manet) cloud_.reelect(*rec.manet, t);
}

std::uint64_t Middleware::relay(const std::string& src_manet, const std::string& dst_manet, linkmodel::DataType type,
                                double size_bits, double t) {
    const std::uint64_t id = cloud_.relay_begin(src_manet, dst_manet, type, size_bits, t);
    queue_.schedule(cloud_.relay(id).leg1_end, [this, id](double now) {
        if (const auto end = cloud_.relay_second_leg(id, now))
            queue_.schedule(*end, [this, id](double later) { cloud_.relay_finish(id, later); });
    });
    return id;
}

}  // namespace cmanet::middleware
