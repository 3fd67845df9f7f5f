#pragma once

// Hand-rolled generators for the property tests. SplitMix64 underneath, so
// every case is reproducible from (seed, case index) alone.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace cmanet::test {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double real(double lo, double hi) { return lo + (hi - lo) * unit(); }
    /// Uniform on [lo, hi].
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
    bool coin(double p = 0.5) { return unit() < p; }

    template <class T>
    const T& pick(const std::vector<T>& items) {
        return items[next() % items.size()];
    }

    /// Random probability vector with k entries, all strictly positive.
    std::vector<double> simplex(int k) {
        std::vector<double> p(static_cast<std::size_t>(k));
        double s = 0.0;
        for (auto& v : p) s += v = 0.01 + unit();
        for (auto& v : p) v /= s;
        return p;
    }

    /// Row-stochastic k x k matrix with strictly positive entries.
    std::vector<std::vector<double>> stochastic(int k) {
        std::vector<std::vector<double>> m;
        for (int i = 0; i < k; ++i) m.push_back(simplex(k));
        return m;
    }

private:
    std::uint64_t state_;
};

inline std::string case_label(std::uint64_t seed, int i) {
    return "seed " + std::to_string(seed) + " case " + std::to_string(i);
}

}  // namespace cmanet::test
