#include "cmanet/network.hpp"

#include "cmanet/error.hpp"

namespace cmanet {

ManetRegistry::ManetRegistry(std::vector<std::string> ids) {
    devices_.reserve(ids.size());
    for (auto& id : ids) {
        if (by_id_.count(id) != 0) throw Error(Errc::DuplicateId, "duplicate device id " + id);
        by_id_.emplace(id, devices_.size());
        DeviceRecord rec;
        rec.id = std::move(id);
        devices_.push_back(std::move(rec));
    }
}

std::optional<DeviceIndex> ManetRegistry::find(std::string_view id) const {
    const auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

void ManetRegistry::join(DeviceIndex i, const std::string& manet_id) {
    leave(i);
    auto& net = manets_[manet_id];
    net.id = manet_id;
    net.members.insert(i);
    devices_.at(i).manet = manet_id;
}

void ManetRegistry::leave(DeviceIndex i) {
    auto& rec = devices_.at(i);
    if (!rec.manet) return;
    auto it = manets_.find(*rec.manet);
    if (it != manets_.end()) {
        it->second.members.erase(i);
        if (it->second.gateway == i) it->second.gateway.reset();
    }
    rec.manet.reset();
}

ManetNetwork* ManetRegistry::manet(const std::string& id) {
    const auto it = manets_.find(id);
    return it == manets_.end() ? nullptr : &it->second;
}

const ManetNetwork* ManetRegistry::manet(const std::string& id) const {
    const auto it = manets_.find(id);
    return it == manets_.end() ? nullptr : &it->second;
}

}  // namespace cmanet
