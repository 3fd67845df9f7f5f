#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmanet/linkmodel.hpp"
#include "cmanet/network.hpp"
#include "cmanet/trace.hpp"

namespace cmanet::cloud {

struct GatewayStatus {
    std::string manet_id;
    std::optional<std::string> gateway_device;
    bool uplink = false;

    friend bool operator==(const GatewayStatus&, const GatewayStatus&) = default;
};

/// One MANET member as seen by the election.
struct GatewayCandidate {
    std::string device_id;
    bool uplink = false;
    std::optional<linkmodel::LinkLifetime> uplink_life;
};

/// Picks the uplink-capable member with the largest remaining uplink life,
/// ties to the lexicographically smaller id. Pure.
GatewayStatus elect_gateway(const std::string& manet_id, std::span<const GatewayCandidate> members);

struct ConnectionCandidate {
    std::string peer;
    double expected_life = 0.0;  // seconds
    double rate_mbps = 0.0;
};

/// argmax of expected_life * rate; ties to the smaller peer id.
/// Throws Errc::EmptyCandidates on an empty list.
std::string select_best_connection(std::string_view device, std::span<const ConnectionCandidate> candidates);

struct SessionGrant {
    std::string session_id;
    std::string device_id;
    std::string manet_id;
    std::string route;  // "direct" or "via:<gateway id>"
    std::string gateway;
    double opened_at = 0.0;
};

enum class RelayStatus { InFlight, Delivered, Failed };

struct RelayRecord {
    std::uint64_t id = 0;
    std::string src_manet;
    std::string dst_manet;
    std::string src_gateway;
    std::string dst_gateway;
    linkmodel::DataType type = linkmodel::DataType::Text;
    double size_bits = 0.0;
    double start = 0.0;
    double leg1_end = 0.0;
    double end = 0.0;
    int failed_leg = 0;
    RelayStatus status = RelayStatus::InFlight;
};

struct CloudConfig {
    double relay_latency = 0.05;  // seconds per leg
    linkmodel::RateTable rates = linkmodel::RateTable::defaults();
    linkmodel::RangeClass range{linkmodel::RangeLabel::R50};
    double overhead = 0.0;
    numerics::LogNormalParams uplink_lifetime = linkmodel::default_lifetime_params();
};

/// The simulated cloud: registry, authentication, sessions, gateway
/// designation and inter-MANET relay. Mutated only from engine events.
class Cloud {
public:
    Cloud(ManetRegistry& registry, Trace& trace, CloudConfig config);

    /// Stores the credential digest. Throws Errc::DuplicateId.
    void register_device(const std::string& device_id, std::string_view credential, double t);
    bool is_registered(std::string_view device_id) const;
    std::size_t registered_count() const noexcept { return credential_digests_.size(); }

    /// Returns a login token. Throws Errc::NotRegistered / Errc::AuthFailure.
    std::string authenticate(const std::string& device_id, std::string_view password, double t);
    std::optional<std::string> device_for_token(std::string_view token) const;

    /// Connectivity session for the token's device. The grant names the
    /// route: direct when the device is its MANET's gateway, otherwise via
    /// the gateway. Throws Errc::AuthFailure / Errc::NoUplink. A device that
    /// already has a session gets the existing grant back.
    SessionGrant open_session(std::string_view token, double t);
    std::optional<SessionGrant> session_of(std::string_view device_id) const;
    const std::map<std::string, SessionGrant>& sessions() const noexcept { return sessions_; }

    /// Re-runs the election for one MANET and traces a change. Returns the new status.
    GatewayStatus reelect(const std::string& manet_id, double t);
    GatewayStatus gateway_status(const std::string& manet_id) const;
    int gateway_changes() const noexcept { return gateway_changes_; }

    /// Starts a two-leg relay. Returns the relay id; the first leg ends at
    /// relay(id).leg1_end. Throws Errc::NoUplink when either side lacks a gateway.
    std::uint64_t relay_begin(const std::string& src_manet, const std::string& dst_manet, linkmodel::DataType type,
                              double size_bits, double t);
    /// Hands the payload from the cloud to the destination gateway. Returns
    /// the completion time, or nullopt when the relay failed here.
    std::optional<double> relay_second_leg(std::uint64_t id, double t);
    /// Finishes the relay at time t.
    void relay_finish(std::uint64_t id, double t);

    const RelayRecord& relay(std::uint64_t id) const { return relays_.at(id); }
    const std::map<std::uint64_t, RelayRecord>& relays() const noexcept { return relays_; }
    const std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>>& relay_table() const noexcept {
        return relay_table_;
    }

    /// Empty when every registry invariant holds.
    std::vector<std::string> consistency_violations() const;

private:
    double leg_duration(linkmodel::DataType type, double size_bits) const;
    std::optional<std::string> current_gateway(const std::string& manet_id) const;
    void fail_relay(RelayRecord& r, int leg, double t, std::string_view reason);

    ManetRegistry& registry_;
    Trace& trace_;
    CloudConfig config_;
    std::map<std::string, std::string, std::less<>> credential_digests_;
    std::map<std::string, std::string, std::less<>> tokens_;          // token -> device
    std::map<std::string, std::string, std::less<>> token_of_device_;  // device -> token
    std::map<std::string, SessionGrant> sessions_;                     // session id -> grant
    std::map<std::string, std::string, std::less<>> session_of_device_;
    std::map<std::string, GatewayStatus> gateways_;
    std::map<std::uint64_t, RelayRecord> relays_;
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> relay_table_;
    std::uint64_t next_relay_ = 1;
    std::uint64_t next_session_ = 1;
    std::uint64_t next_token_ = 1;
    int gateway_changes_ = 0;
};

}  // namespace cmanet::cloud
