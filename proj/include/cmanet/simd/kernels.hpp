#pragma once

// Batch kernels over structure-of-arrays device state. A scalar reference
// table is always available; an AVX2 table is compiled on x86-64 and chosen
// at runtime when the CPU supports it. Every table produces bit-identical
// output, which the equivalence tests check.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cmanet::simd {

struct GmStepBatch {
    std::span<double> speed;
    std::span<double> direction;
    std::span<const double> lambda;
    std::span<const double> innovation;  // sqrt(1 - lambda^2)
    std::span<const double> mean_speed;
    std::span<const double> mean_direction;
    std::span<const double> speed_sigma;
    std::span<const double> direction_sigma;
    std::span<const double> max_speed;
    std::span<const double> noise_speed;
    std::span<const double> noise_direction;
};

struct IntegrateBatch {
    std::span<double> x;
    std::span<double> y;
    std::span<double> direction;
    std::span<const double> speed;
    std::span<const double> cos_direction;
    std::span<const double> sin_direction;
    double dt = 1.0;
    double width = 0.0;
    double height = 0.0;
};

struct RangeQuery {
    double px = 0.0;
    double py = 0.0;
    std::span<const double> x;
    std::span<const double> y;
    double radius_sq = 0.0;
    std::span<double> dist_sq;      // out
    std::span<std::uint8_t> within; // out: 1 iff dist_sq <= radius_sq
};

struct KernelTable {
    std::string_view name;
    void (*gm_step)(const GmStepBatch&);
    void (*integrate)(const IntegrateBatch&);
    void (*range_query)(const RangeQuery&);
};

const KernelTable& scalar_kernels();

/// nullptr when AVX2 support was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

/// The table the engine uses. Picks AVX2 when available unless the
/// environment variable CMANET_SIMD is set to "scalar".
const KernelTable& active_kernels();

/// Fills cos/sin arrays. Shared by every table so trig never diverges.
void direction_cosines(std::span<const double> direction, std::span<double> cos_out, std::span<double> sin_out);

}  // namespace cmanet::simd
