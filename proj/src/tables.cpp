#include "cmanet/tables.hpp"

#include <charconv>
#include <cmath>

#include "cmanet/error.hpp"
#include "cmanet/rng.hpp"
#include "cmanet/sweep.hpp"

namespace cmanet {

namespace {

using linkmodel::RangeClass;
using linkmodel::RangeLabel;

// Measured maximum throughput, Mbps: Text, Image, Voice, Video.
constexpr std::array<std::array<double, 4>, 3> kMeasured{{
    {10.0, 8.1, 8.5, 5.8},  // 50 m
    {10.0, 7.2, 8.5, 4.0},  // 100 m
    {10.0, 6.8, 8.2, 2.6},  // 200 m
}};

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string eps_label(double e) { return num(e); }

}  // namespace

bool TransmissionTable::ordering_holds() const {
    for (std::size_t j = 0; j < kTableEpsilons.size(); ++j)
        if (!(score[2][j] > score[1][j] && score[1][j] > score[0][j])) return false;
    return true;
}

std::array<double, 4> ThroughputTable::deviation_pct() const {
    std::array<double, 4> d{};
    for (std::size_t k = 0; k < 4; ++k) d[k] = 100.0 * (simulated[k] - reference[k]) / reference[k];
    return d;
}

bool ThroughputTable::within(double tolerance_pct) const {
    for (double d : deviation_pct())
        if (!(std::fabs(d) <= tolerance_pct)) return false;
    return true;
}

TransmissionTable transmission_table(int id, std::uint64_t seed, int jobs) {
    if (id != 1 && id != 2) throw Error(Errc::InvalidArgument, "transmission tables are 1 and 2");
    TransmissionTable table;
    table.id = id;
    table.mean_speed = id == 1 ? 50.0 : 100.0;

    std::vector<ScenarioConfig> configs;
    for (std::size_t i = 0; i < kTableDevices.size(); ++i) {
        const std::uint64_t row_seed = derive_seed(seed, "devices", i);
        for (std::size_t j = 0; j < kTableEpsilons.size(); ++j) {
            ScenarioConfig c = traffic_preset(table.mean_speed, kTableDevices[i], kTableEpsilons[j]);
            c.name = "table" + std::to_string(id);
            c.seed = derive_seed(row_seed, "epsilon_k", j);
            configs.push_back(std::move(c));
        }
    }
    const auto results = run_all(configs, jobs);
    for (std::size_t i = 0; i < kTableDevices.size(); ++i)
        for (std::size_t j = 0; j < kTableEpsilons.size(); ++j)
            table.score[i][j] = results[i * kTableEpsilons.size() + j].summary.transmission_score;
    return table;
}

ThroughputTable throughput_table(int id, const linkmodel::RateTable& rates) {
    if (id < 3 || id > 5) throw Error(Errc::InvalidArgument, "throughput tables are 3, 4 and 5");
    ThroughputTable table;
    table.id = id;
    table.range = RangeClass(linkmodel::kRangeLabels[static_cast<std::size_t>(id - 3)]);
    table.reference = kMeasured[static_cast<std::size_t>(id - 3)];
    ScenarioConfig c = preset("table" + std::to_string(id));
    c.rates = rates;
    const RunResult r = run(c);
    for (std::size_t k = 0; k < 4; ++k) table.simulated[k] = r.summary.throughput_mbps[k];
    return table;
}

TableOutput make_table(int id, std::uint64_t seed, int jobs, const linkmodel::RateTable& rates) {
    TableOutput out;
    out.id = id;
    const std::string scenario = "table" + std::to_string(id);
    if (id == 1 || id == 2) {
        const TransmissionTable t = transmission_table(id, seed, jobs);
        out.csv = "devices_count";
        for (double e : kTableEpsilons) out.csv += ",score_eps" + eps_label(e) + "_dimensionless";
        out.csv += "\n";
        Json rows = Json::array();
        for (std::size_t i = 0; i < kTableDevices.size(); ++i) {
            out.csv += std::to_string(kTableDevices[i]);
            Json row{{"devices", kTableDevices[i]}, {"scores", Json::array()}};
            for (std::size_t j = 0; j < kTableEpsilons.size(); ++j) {
                out.csv += "," + num(t.score[i][j]);
                row["scores"].push_back(t.score[i][j]);
                out.metrics.push_back(
                    MetricRow{"transmission_score_dimensionless", scenario, kTableEpsilons[j], kTableDevices[i], t.score[i][j]});
            }
            out.csv += "\n";
            rows.push_back(std::move(row));
        }
        out.passed = t.ordering_holds();
        out.json = Json{{"table", id},
                        {"mean_speed_mps", t.mean_speed},
                        {"epsilon_k", kTableEpsilons},
                        {"rows", rows},
                        {"ordering_holds", out.passed}};
        return out;
    }
    if (id >= 3 && id <= 5) {
        const ThroughputTable t = throughput_table(id, rates);
        const auto dev = t.deviation_pct();
        out.csv = "data_type,range,simulated_Mbps,reference_Mbps,deviation_pct\n";
        Json rows = Json::array();
        for (std::size_t k = 0; k < 4; ++k) {
            const std::string type(linkmodel::to_string(linkmodel::kDataTypes[k]));
            out.csv += type + "," + std::string(t.range.name()) + "," + num(t.simulated[k]) + "," + num(t.reference[k]) + "," +
                       num(dev[k]) + "\n";
            rows.push_back(Json{{"data_type", type},
                                {"simulated_Mbps", t.simulated[k]},
                                {"reference_Mbps", t.reference[k]},
                                {"deviation_pct", dev[k]}});
            out.metrics.push_back(MetricRow{"throughput_" + type + "_Mbps", scenario, 1.0, 2, t.simulated[k]});
        }
        out.passed = t.within(kThroughputTolerancePct);
        out.json = Json{{"table", id}, {"range", t.range.name()}, {"rows", rows}, {"within_tolerance", out.passed}};
        return out;
    }
    throw Error(Errc::InvalidArgument, "unknown table " + std::to_string(id) + " (expected 1 to 5)");
}

}  // namespace cmanet
