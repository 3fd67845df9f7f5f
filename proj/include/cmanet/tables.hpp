#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cmanet/engine.hpp"

namespace cmanet {

inline constexpr std::array<int, 3> kTableDevices{5, 10, 50};
inline constexpr std::array<double, 6> kTableEpsilons{0.1, 0.2, 0.4, 0.6, 0.8, 1.0};

/// Tables 1 and 2: transmission score per device count (rows) and
/// epsilon_k (columns) at one mean speed.
struct TransmissionTable {
    int id = 1;
    double mean_speed = 50.0;
    std::array<std::array<double, 6>, 3> score{};

    /// score(50) > score(10) > score(5) in every column.
    bool ordering_holds() const;
};

/// Tables 3 to 5: throughput per data type at one range class.
struct ThroughputTable {
    int id = 3;
    linkmodel::RangeClass range{linkmodel::RangeLabel::R50};
    std::array<double, 4> simulated{};
    std::array<double, 4> reference{};

    /// Signed relative deviation in percent.
    std::array<double, 4> deviation_pct() const;
    bool within(double tolerance_pct) const;
};

struct TableOutput {
    int id = 0;
    std::string csv;                 // same rows and columns as the table
    std::vector<MetricRow> metrics;  // long form for the plotting tools
    Json json;
    bool passed = false;             // ordering (1, 2) or +-5 % (3 to 5)
};

inline constexpr double kThroughputTolerancePct = 5.0;

TransmissionTable transmission_table(int id, std::uint64_t seed, int jobs);
ThroughputTable throughput_table(int id, const linkmodel::RateTable& rates = linkmodel::RateTable::defaults());

/// Throws Errc::InvalidArgument unless 1 <= id <= 5.
TableOutput make_table(int id, std::uint64_t seed, int jobs,
                       const linkmodel::RateTable& rates = linkmodel::RateTable::defaults());

}  // namespace cmanet
