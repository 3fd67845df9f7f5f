#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cmanet/engine.hpp"

namespace cmanet {

enum class SweepAxis { Devices, EpsilonK, Range, Speed };

std::optional<SweepAxis> parse_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

/// Returns `config` with one parameter replaced. Range values are radii
/// (50, 100, 200); speed sets the mean and widens max_speed to 2x if needed.
ScenarioConfig apply_axis(ScenarioConfig config, SweepAxis axis, double value);

/// One run per value, each with its own derived seed. Runs execute on up to
/// `jobs` threads; results come back in value order regardless.
/// Throws Errc::UnknownAxis or Errc::InvalidArgument (empty values).
std::vector<RunResult> sweep(const ScenarioConfig& config, std::string_view axis, std::span<const double> values,
                             int jobs = 1);

/// Runs every config on up to `jobs` threads, preserving order.
std::vector<RunResult> run_all(const std::vector<ScenarioConfig>& configs, int jobs);

}  // namespace cmanet
