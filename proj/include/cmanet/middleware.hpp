#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cmanet/cloud.hpp"
#include "cmanet/error.hpp"
#include "cmanet/event_queue.hpp"
#include "cmanet/linkmodel.hpp"
#include "cmanet/metrics.hpp"
#include "cmanet/network.hpp"
#include "cmanet/trace.hpp"

namespace cmanet::middleware {

enum class Phase { Installed = 0, Registered = 1, LoggedIn = 2, ManetActive = 3, Connected = 4 };
std::string_view to_string(Phase p);
std::optional<Phase> parse_phase(std::string_view s);

/// True when `to` may follow `from` in a device's life: the forward order
/// Installed -> Registered -> LoggedIn -> ManetActive, toggling between
/// ManetActive and Connected, and leaving a MANET back to LoggedIn.
bool phase_step_allowed(Phase from, Phase to);

struct DeviceState {
    std::string id;
    Phase phase = Phase::Installed;
    std::string credential;  // issued at registration
    std::string token;       // issued at login
    std::set<std::string> blacklist;
};

struct Neighbor {
    std::string id;
    double distance = 0.0;
};

struct DiscoveryResult {
    std::vector<Neighbor> neighbors;
    linkmodel::Channel channel = linkmodel::Channel::WiFi;
};

enum class ConnState { Requested, Confirmed, Active, Closed };
std::string_view to_string(ConnState s);

struct Connection {
    std::uint64_t id = 0;
    DeviceIndex initiator = 0;
    DeviceIndex target = 0;
    linkmodel::Channel channel = linkmodel::Channel::WiFi;
    ConnState state = ConnState::Requested;
    double requested_at = 0.0;
    double established_at = 0.0;
    double closed_at = 0.0;
    double busy_until = 0.0;
    std::optional<Errc> failure;  // why the connection ended, if abnormally
    std::string close_reason;

    bool involves(DeviceIndex i) const noexcept { return initiator == i || target == i; }
    DeviceIndex peer_of(DeviceIndex i) const noexcept { return initiator == i ? target : initiator; }
};

struct MiddlewareConfig {
    std::uint64_t seed = 0;
    linkmodel::RangeClass range{linkmodel::RangeLabel::R50};
    linkmodel::RateTable rates = linkmodel::RateTable::defaults();
    double overhead = 0.0;
    numerics::LogNormalParams lifetime = linkmodel::default_lifetime_params();
    double accept_delay = 0.05;     // request -> confirm, seconds
    double confirm_timeout = 2.0;   // request -> HandshakeTimeout, seconds
};

/// Per-device protocol state machine: registration, login, MANET start,
/// discovery, blacklists, the request/confirm handshake and typed transfers.
/// Every handler runs inside the engine's event loop and reports to the trace.
class Middleware {
public:
    Middleware(ManetRegistry& registry, cloud::Cloud& cloud, EventQueue& queue, Trace& trace,
               MiddlewareConfig config);

    /// Positions are read through this view; the owner keeps the arrays alive.
    void set_positions(Snapshot snapshot) { positions_ = snapshot; }

    std::size_t size() const noexcept { return devices_.size(); }
    const DeviceState& device(DeviceIndex i) const { return devices_.at(i); }
    Phase phase(DeviceIndex i) const { return devices_.at(i).phase; }
    DeviceIndex index_of(std::string_view id) const;

    /// Returns the issued credential. Throws Errc::DuplicateId when the id
    /// is already registered.
    std::string register_device(DeviceIndex i, double t);
    /// Returns the session token. Throws Errc::NotRegistered, Errc::AuthFailure
    /// or Errc::OrderViolation.
    std::string login(DeviceIndex i, std::string_view password, double t);
    /// Throws Errc::ConfigMissing on an empty net_config, Errc::OrderViolation
    /// unless the device is logged in.
    void start_manet(DeviceIndex i, const std::string& net_config, double t);
    /// Closes the device's connections and returns it to LoggedIn.
    void leave_manet(DeviceIndex i, double t);

    DiscoveryResult discover(DeviceIndex i, linkmodel::Channel channel, double t);
    const DiscoveryResult* last_discovery(DeviceIndex i) const;

    /// Unilateral. Closes any connection with the blacklisted device.
    void blacklist(DeviceIndex i, const std::string& other, double t);

    /// Sends a connection request. Confirmation runs accept_delay later;
    /// an unanswered request ends in HandshakeTimeout after confirm_timeout.
    std::uint64_t connect(DeviceIndex initiator, const std::string& target, double t);
    const Connection& connection(std::uint64_t id) const { return connections_.at(id); }
    const std::map<std::uint64_t, Connection>& connections() const noexcept { return connections_; }
    /// Active or pending connection between the two devices, if any.
    std::optional<std::uint64_t> link_between(DeviceIndex a, DeviceIndex b) const;
    std::vector<std::uint64_t> active_connections(DeviceIndex i) const;
    /// True while the device has a request awaiting confirmation.
    bool has_pending(DeviceIndex i) const;

    /// Queues a transfer on an Active connection; returns the transfer id.
    /// Throws Errc::ConnectionClosed or Errc::LinkDown.
    std::uint64_t send(std::uint64_t conn_id, DeviceIndex sender, linkmodel::DataType type, double size_bits,
                       double t);
    const metrics::TransferRecord& transfer(std::uint64_t id) const { return transfers_.at(id - 1); }
    const std::vector<metrics::TransferRecord>& transfers() const noexcept { return transfers_; }
    bool busy(std::uint64_t conn_id, double t) const { return connections_.at(conn_id).busy_until > t; }

    /// Rate of the link between two devices at their current distance.
    double link_rate(const Connection& conn, linkmodel::DataType type) const;
    double distance(DeviceIndex a, DeviceIndex b) const;
    double channel_radius(linkmodel::Channel channel) const;

    /// Closes every Active connection whose endpoints drifted out of range.
    void on_positions(double t);

    /// Cloud session for a logged-in device.
    cloud::SessionGrant request_session(DeviceIndex i, double t);
    /// Toggles the uplink flag and re-runs the gateway election.
    void set_uplink(DeviceIndex i, bool on, double t);
    /// Starts a cloud relay and schedules both legs.
    std::uint64_t relay(const std::string& src_manet, const std::string& dst_manet, linkmodel::DataType type,
                        double size_bits, double t);

private:
    void set_phase(DeviceIndex i, Phase to, double t);
    void require_phase_at_least(DeviceIndex i, Phase p, std::string_view op) const;
    void confirm(std::uint64_t conn_id, double t);
    void timeout(std::uint64_t conn_id, double t);
    void close(Connection& conn, double t, std::string_view reason, std::optional<Errc> failure);
    void complete_transfer(std::uint64_t transfer_id, double t);
    void refresh_connected_phase(DeviceIndex i, double t);
    bool blacklisted_pair(DeviceIndex a, DeviceIndex b) const;

    ManetRegistry& registry_;
    cloud::Cloud& cloud_;
    EventQueue& queue_;
    Trace& trace_;
    MiddlewareConfig config_;
    Snapshot positions_{};
    std::vector<DeviceState> devices_;
    std::map<DeviceIndex, DiscoveryResult> discoveries_;
    std::map<std::uint64_t, Connection> connections_;
    std::vector<std::set<std::uint64_t>> open_by_device_;  // non-closed connection ids
    std::set<std::uint64_t> open_;
    std::vector<metrics::TransferRecord> transfers_;
    std::map<std::uint64_t, std::vector<std::uint64_t>> in_flight_;  // connection -> transfer ids
    std::uint64_t next_conn_ = 1;
};

}  // namespace cmanet::middleware
