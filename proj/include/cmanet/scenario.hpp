#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmanet/linkmodel.hpp"
#include "cmanet/metrics.hpp"
#include "cmanet/mobility.hpp"

namespace cmanet {

/// A device that the scenario pins down explicitly. Devices not listed are
/// generated with ids d00, d01, ... and random placement.
struct DeviceSpec {
    std::string id;
    bool uplink = false;
    std::optional<double> x;
    std::optional<double> y;
    std::optional<double> direction;  // initial heading, radians
    bool stationary = false;
    std::string net_config;  // empty: use the scenario default
};

/// One timed workload action. `device` may be "all".
///
/// action      fields used
///   register    device
///   login       device, password (empty: the issued credential)
///   start       device, net_config (empty: the device's own)
///   leave       device
///   discover    device, channel
///   connect     device, target
///   blacklist   device, target
///   send        device, target, data_type, size_bits
///   stream      device, target, data_type, size_bits (per chunk), until
///   session     device
///   uplink      device, on
///   relay       src_manet, dst_manet, data_type, size_bits
struct WorkloadAction {
    double t = 0.0;
    std::string action;
    std::string device;
    std::string target;
    std::string password;
    std::string channel = "wifi";
    std::string data_type = "Text";
    double size_bits = 0.0;
    double until = 0.0;
    bool on = true;
    std::string net_config;
    std::string src_manet;
    std::string dst_manet;
};

/// Periodic traffic driving the transmission score: every `period` seconds
/// each device sends one message on a live connection, or discovers and
/// connects to its best neighbour when it has none.
struct ExperimentConfig {
    bool enabled = false;
    double epsilon_k = 1.0;
    double interval = 10.0;
    double period = 1.0;
    double message_bits = 8000.0;
    linkmodel::DataType data_type = linkmodel::DataType::Text;
};

struct ConnectivityConfig {
    double sigma = 1.0;
    double alpha = 10.0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    double duration = 300.0;
    double dt = 1.0;
    mobility::Arena arena{500.0, 500.0};
    linkmodel::RangeClass range{linkmodel::RangeLabel::R50};
    double overhead = 0.0;
    linkmodel::RateTable rates = linkmodel::RateTable::defaults();
    numerics::LogNormalParams lifetime = linkmodel::default_lifetime_params();
    double accept_delay = 0.05;
    double confirm_timeout = 2.0;
    double relay_latency = 0.05;

    mobility::MobilityParams mobility;
    int device_count = 1;
    std::string net_config = "manet-1";
    bool uplink_all = false;
    std::vector<DeviceSpec> custom_devices;

    ExperimentConfig experiment;
    ConnectivityConfig connectivity;
    metrics::EntropyWeight entropy_weight;

    std::vector<WorkloadAction> workload;

    /// Every violated invariant, empty when the config is runnable.
    std::vector<std::string> violations() const;
    /// Throws ValidationError listing all violations.
    void validate() const;

    /// Final device list: custom devices first, generated ones after.
    std::vector<DeviceSpec> devices() const;
};

/// Throws ValidationError on schema errors, Error(Errc::Io) when unreadable.
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(std::string_view toml_text, const std::filesystem::path& base_dir = {});
std::string to_toml(const ScenarioConfig& config);

/// Built-in scenarios: table1 ... table5, relay-demo.
std::vector<std::string> preset_names();
/// Throws Errc::InvalidArgument on an unknown name.
ScenarioConfig preset(std::string_view name);

/// The table presets, parameterised for sweeps.
ScenarioConfig traffic_preset(double mean_speed, int devices, double epsilon_k);
ScenarioConfig throughput_preset(linkmodel::RangeClass range);

}  // namespace cmanet
