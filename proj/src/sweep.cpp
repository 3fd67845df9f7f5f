#include "cmanet/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "cmanet/error.hpp"
#include "cmanet/rng.hpp"

namespace cmanet {

std::optional<SweepAxis> parse_axis(std::string_view name) {
    if (name == "devices") return SweepAxis::Devices;
    if (name == "epsilon_k") return SweepAxis::EpsilonK;
    if (name == "range") return SweepAxis::Range;
    if (name == "speed") return SweepAxis::Speed;
    return std::nullopt;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Devices: return "devices";
        case SweepAxis::EpsilonK: return "epsilon_k";
        case SweepAxis::Range: return "range";
        case SweepAxis::Speed: return "speed";
    }
    return "?";
}

ScenarioConfig apply_axis(ScenarioConfig config, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::Devices:
            if (!(value >= 1.0) || value != std::floor(value))
                throw Error(Errc::InvalidArgument, "device count must be a positive integer");
            config.device_count = static_cast<int>(value);
            break;
        case SweepAxis::EpsilonK:
            config.experiment.epsilon_k = value;
            break;
        case SweepAxis::Range: {
            const auto rc = linkmodel::RangeClass::parse(std::to_string(static_cast<int>(value)) + "m");
            if (!rc || rc->radius() != value) throw Error(Errc::InvalidArgument, "range must be 50, 100 or 200");
            config.range = *rc;
            break;
        }
        case SweepAxis::Speed:
            if (!(value >= 0.0)) throw Error(Errc::InvalidArgument, "speed must be >= 0");
            config.mobility.mean_speed = value;
            config.mobility.max_speed = std::max(config.mobility.max_speed, 2.0 * value);
            break;
    }
    return config;
}

std::vector<RunResult> run_all(const std::vector<ScenarioConfig>& configs, int jobs) {
    std::vector<RunResult> results(configs.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), configs.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                results[i] = run(configs[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

std::vector<RunResult> sweep(const ScenarioConfig& config, std::string_view axis_name, std::span<const double> values,
                             int jobs) {
    const auto axis = parse_axis(axis_name);
    if (!axis) throw Error(Errc::UnknownAxis, "unknown sweep axis '" + std::string(axis_name) + "'");
    if (values.empty()) throw Error(Errc::InvalidArgument, "sweep needs at least one value");
    std::vector<ScenarioConfig> configs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig c = apply_axis(config, *axis, values[i]);
        c.seed = derive_seed(config.seed, axis_name, i);
        configs.push_back(std::move(c));
    }
    return run_all(configs, jobs);
}

}  // namespace cmanet
