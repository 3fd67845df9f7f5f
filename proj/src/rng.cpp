#include "cmanet/rng.hpp"

namespace cmanet {

namespace {

// SplitMix64 finaliser.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t absorb(std::uint64_t h, std::string_view s) {
    // FNV-1a over the bytes, then a length separator so ("ab","c") != ("a","bc").
    std::uint64_t f = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        f ^= c;
        f *= 0x100000001b3ULL;
    }
    return mix(h ^ mix(f ^ s.size()));
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::string_view device_id, std::string_view label) {
    return absorb(absorb(mix(seed), device_id), label);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view axis, std::uint64_t index) {
    return mix(absorb(mix(seed ^ 0x5eed5eed5eed5eedULL), axis) ^ mix(index));
}

}  // namespace cmanet
