#include "cmanet/cloud.hpp"

#include <algorithm>
#include <cmath>

#include "cmanet/error.hpp"

namespace cmanet::cloud {

GatewayStatus elect_gateway(const std::string& manet_id, std::span<const GatewayCandidate> members) {
    GatewayStatus status{manet_id, std::nullopt, false};
    double best_life = -1.0;
    for (const auto& m : members) {
        if (!m.uplink) continue;
        double life = 0.0;
        if (m.uplink_life) {
            try {
                life = linkmodel::remaining_life(*m.uplink_life);
            } catch (const Error&) {
                life = 0.0;  // survival underflow: the uplink is as good as gone
            }
        }
        const bool better = life > best_life || (life == best_life && status.gateway_device && m.device_id < *status.gateway_device);
        if (!status.gateway_device || better) {
            status.gateway_device = m.device_id;
            best_life = life;
        }
    }
    status.uplink = status.gateway_device.has_value();
    return status;
}

std::string select_best_connection(std::string_view device, std::span<const ConnectionCandidate> candidates) {
    if (candidates.empty())
        throw Error(Errc::EmptyCandidates, "no connection candidates for " + std::string(device));
    const ConnectionCandidate* best = nullptr;
    double best_score = 0.0;
    for (const auto& c : candidates) {
        const double score = c.expected_life * c.rate_mbps;
        if (best == nullptr || score > best_score || (score == best_score && c.peer < best->peer)) {
            best = &c;
            best_score = score;
        }
    }
    return best->peer;
}

Cloud::Cloud(ManetRegistry& registry, Trace& trace, CloudConfig config)
    : registry_(registry), trace_(trace), config_(std::move(config)) {}

void Cloud::register_device(const std::string& device_id, std::string_view credential, double t) {
    if (credential_digests_.count(device_id) != 0)
        throw Error(Errc::DuplicateId, "device " + device_id + " is already registered");
    credential_digests_.emplace(device_id, sha256_hex(credential));
    trace_.emit(t, "cloud_register", device_id, "cloud", Json{{"registered", credential_digests_.size()}});
}

bool Cloud::is_registered(std::string_view device_id) const { return credential_digests_.count(device_id) != 0; }

std::string Cloud::authenticate(const std::string& device_id, std::string_view password, double t) {
    const auto it = credential_digests_.find(device_id);
    if (it == credential_digests_.end()) throw Error(Errc::NotRegistered, "device " + device_id + " is not registered");
    if (sha256_hex(password) != it->second) throw Error(Errc::AuthFailure, "wrong credential for " + device_id);
    if (const auto old = token_of_device_.find(device_id); old != token_of_device_.end()) tokens_.erase(old->second);
    std::string token = "tok-" + std::to_string(next_token_++) + "-" + device_id;
    tokens_[token] = device_id;
    token_of_device_[device_id] = token;
    trace_.emit(t, "cloud_auth", device_id, "cloud", Json{{"token", token}});
    return token;
}

std::optional<std::string> Cloud::device_for_token(std::string_view token) const {
    const auto it = tokens_.find(token);
    if (it == tokens_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Cloud::current_gateway(const std::string& manet_id) const {
    const auto* net = registry_.manet(manet_id);
    if (net == nullptr || !net->gateway) return std::nullopt;
    return registry_.device(*net->gateway).id;
}

SessionGrant Cloud::open_session(std::string_view token, double t) {
    const auto device_id = device_for_token(token);
    if (!device_id) throw Error(Errc::AuthFailure, "invalid session token");
    if (const auto existing = session_of(*device_id)) return *existing;

    const auto idx = registry_.find(*device_id);
    const auto& manet = idx ? registry_.device(*idx).manet : std::optional<std::string>{};
    if (!manet) throw Error(Errc::NoUplink, "device " + *device_id + " is not in a MANET");
    const auto gateway = current_gateway(*manet);
    if (!gateway) throw Error(Errc::NoUplink, "MANET " + *manet + " has no uplink gateway");

    SessionGrant grant;
    grant.session_id = "sess-" + std::to_string(next_session_++);
    grant.device_id = *device_id;
    grant.manet_id = *manet;
    grant.gateway = *gateway;
    grant.route = *gateway == *device_id ? "direct" : "via:" + *gateway;
    grant.opened_at = t;
    sessions_[grant.session_id] = grant;
    session_of_device_[*device_id] = grant.session_id;
    trace_.emit(t, "session_open", *device_id, "cloud",
                Json{{"session", grant.session_id}, {"route", grant.route}, {"manet", grant.manet_id}});
    return grant;
}

std::optional<SessionGrant> Cloud::session_of(std::string_view device_id) const {
    const auto it = session_of_device_.find(device_id);
    if (it == session_of_device_.end()) return std::nullopt;
    return sessions_.at(it->second);
}

GatewayStatus Cloud::reelect(const std::string& manet_id, double t) {
    ManetNetwork* net = registry_.manet(manet_id);
    std::vector<GatewayCandidate> members;
    if (net != nullptr) {
        for (DeviceIndex i : net->members) {
            const auto& rec = registry_.device(i);
            GatewayCandidate c{rec.id, rec.uplink, std::nullopt};
            if (rec.uplink) c.uplink_life = linkmodel::LinkLifetime{config_.uplink_lifetime, std::max(0.0, t - rec.uplink_since)};
            members.push_back(std::move(c));
        }
    }
    const GatewayStatus status = elect_gateway(manet_id, members);
    if (net != nullptr) net->gateway = status.gateway_device ? registry_.find(*status.gateway_device) : std::nullopt;

    const auto previous = gateways_.find(manet_id);
    const bool changed = previous == gateways_.end() ? status.uplink : !(previous->second == status);
    gateways_[manet_id] = status;
    if (changed) {
        ++gateway_changes_;
        trace_.emit(t, "gateway", status.gateway_device.value_or(""), "cloud",
                    Json{{"manet", manet_id}, {"uplink", status.uplink}});
        // The gateway's own cloud session opens as soon as it is designated.
        if (status.gateway_device) {
            if (const auto tok = token_of_device_.find(*status.gateway_device); tok != token_of_device_.end())
                open_session(tok->second, t);
        }
    }
    return status;
}

GatewayStatus Cloud::gateway_status(const std::string& manet_id) const {
    const auto it = gateways_.find(manet_id);
    if (it == gateways_.end()) return GatewayStatus{manet_id, std::nullopt, false};
    return it->second;
}

double Cloud::leg_duration(linkmodel::DataType type, double size_bits) const {
    return linkmodel::transfer_duration(size_bits, type, config_.range, config_.rates, config_.overhead) +
           config_.relay_latency;
}

std::uint64_t Cloud::relay_begin(const std::string& src_manet, const std::string& dst_manet, linkmodel::DataType type,
                                 double size_bits, double t) {
    if (!(size_bits > 0.0)) throw Error(Errc::InvalidArgument, "relay payload must be non-empty");
    const auto src_gw = current_gateway(src_manet);
    const auto dst_gw = current_gateway(dst_manet);
    if (!src_gw) throw Error(Errc::NoUplink, "source MANET " + src_manet + " has no gateway");
    if (!dst_gw) throw Error(Errc::NoUplink, "destination MANET " + dst_manet + " has no gateway");
    if (!session_of(*src_gw) || !session_of(*dst_gw))
        throw Error(Errc::NoUplink, "relay gateways have no open cloud session");

    RelayRecord r;
    r.id = next_relay_++;
    r.src_manet = src_manet;
    r.dst_manet = dst_manet;
    r.src_gateway = *src_gw;
    r.dst_gateway = *dst_gw;
    r.type = type;
    r.size_bits = size_bits;
    r.start = t;
    r.leg1_end = t + leg_duration(type, size_bits);
    relay_table_[{src_manet, dst_manet}] = {*src_gw, *dst_gw};
    trace_.emit(t, "relay_start", *src_gw, *dst_gw,
                Json{{"relay", r.id}, {"src_manet", src_manet}, {"dst_manet", dst_manet},
                     {"type", linkmodel::to_string(type)}, {"bits", size_bits}});
    relays_[r.id] = r;
    return r.id;
}

void Cloud::fail_relay(RelayRecord& r, int leg, double t, std::string_view reason) {
    r.status = RelayStatus::Failed;
    r.failed_leg = leg;
    r.end = t;
    trace_.emit(t, "relay_failed", r.src_gateway, r.dst_gateway,
                Json{{"relay", r.id}, {"leg", leg}, {"reason", reason}});
}

std::optional<double> Cloud::relay_second_leg(std::uint64_t id, double t) {
    RelayRecord& r = relays_.at(id);
    if (r.status != RelayStatus::InFlight) return std::nullopt;
    if (current_gateway(r.src_manet) != r.src_gateway) {
        fail_relay(r, 1, t, "source gateway lost");
        return std::nullopt;
    }
    const auto dst_gw = current_gateway(r.dst_manet);
    if (!dst_gw) {
        fail_relay(r, 2, t, "destination gateway lost");
        return std::nullopt;
    }
    r.dst_gateway = *dst_gw;
    trace_.emit(t, "relay_leg", "cloud", r.dst_gateway, Json{{"relay", r.id}, {"leg", 2}});
    return t + leg_duration(r.type, r.size_bits);
}

void Cloud::relay_finish(std::uint64_t id, double t) {
    RelayRecord& r = relays_.at(id);
    if (r.status != RelayStatus::InFlight) return;
    if (current_gateway(r.dst_manet) != r.dst_gateway) {
        fail_relay(r, 2, t, "destination gateway lost");
        return;
    }
    r.status = RelayStatus::Delivered;
    r.end = t;
    trace_.emit(t, "relay_delivered", r.src_gateway, r.dst_gateway,
                Json{{"relay", r.id}, {"src_manet", r.src_manet}, {"dst_manet", r.dst_manet},
                     {"type", linkmodel::to_string(r.type)}, {"bits", r.size_bits}});
}

std::vector<std::string> Cloud::consistency_violations() const {
    std::vector<std::string> out;
    std::map<std::string, int> per_device;
    for (const auto& [sid, grant] : sessions_) {
        if (!is_registered(grant.device_id)) out.push_back("session " + sid + " belongs to unregistered " + grant.device_id);
        if (++per_device[grant.device_id] > 1) out.push_back("device " + grant.device_id + " has several sessions");
    }
    for (const auto& [id, net] : registry_.manets()) {
        if (!net.gateway) continue;
        if (net.members.count(*net.gateway) == 0) out.push_back("gateway of " + id + " is not a member");
        if (!registry_.device(*net.gateway).uplink) out.push_back("gateway of " + id + " lacks uplink");
    }
    for (const auto& [id, status] : gateways_) {
        const auto* net = registry_.manet(id);
        const auto gw = net != nullptr && net->gateway ? std::optional<std::string>(registry_.device(*net->gateway).id)
                                                       : std::nullopt;
        if (gw != status.gateway_device) out.push_back("gateway record of " + id + " disagrees with the MANET");
    }
    return out;
}

}  // namespace cmanet::cloud
