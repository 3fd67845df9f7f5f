#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cmanet/mobility.hpp"

namespace cmanet {

using DeviceIndex = std::size_t;

struct DeviceRecord {
    std::string id;
    bool uplink = false;
    double uplink_since = 0.0;
    std::optional<std::string> manet;  // set while the device is in a MANET
};

struct ManetNetwork {
    std::string id;
    std::set<DeviceIndex> members;
    std::optional<DeviceIndex> gateway;
};

/// Devices and the MANETs they have joined. Owned by the engine; the
/// middleware and cloud mutate it only from event handlers.
class ManetRegistry {
public:
    explicit ManetRegistry(std::vector<std::string> ids);

    std::size_t size() const noexcept { return devices_.size(); }
    DeviceRecord& device(DeviceIndex i) { return devices_.at(i); }
    const DeviceRecord& device(DeviceIndex i) const { return devices_.at(i); }
    std::optional<DeviceIndex> find(std::string_view id) const;

    void join(DeviceIndex i, const std::string& manet_id);
    void leave(DeviceIndex i);

    ManetNetwork* manet(const std::string& id);
    const ManetNetwork* manet(const std::string& id) const;
    const std::map<std::string, ManetNetwork>& manets() const noexcept { return manets_; }

private:
    std::vector<DeviceRecord> devices_;
    std::map<std::string, DeviceIndex, std::less<>> by_id_;
    std::map<std::string, ManetNetwork> manets_;
};

/// Read-only view of device positions, indexed by DeviceIndex.
struct Snapshot {
    std::span<const double> x;
    std::span<const double> y;

    mobility::Position at(DeviceIndex i) const { return {x[i], y[i]}; }
};

}  // namespace cmanet
