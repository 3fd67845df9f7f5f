#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace cmanet {

/// Stable 64-bit hash of (seed, device id, stream label). Streams seeded
/// from distinct triples never share state, so consuming one never shifts
/// another.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view device_id, std::string_view label);

/// Derives a child seed for sweep point `index` along `axis`.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view axis, std::uint64_t index);

class RandomStream {
public:
    RandomStream() : RandomStream(0) {}
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double gaussian() { return normal_(engine_); }
    double uniform() { return unit_(engine_); }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace cmanet
