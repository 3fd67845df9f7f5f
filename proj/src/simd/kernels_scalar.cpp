#include <cmath>

#include "cmanet/simd/elementwise.hpp"
#include "cmanet/simd/kernels.hpp"

namespace cmanet::simd {

namespace {

void gm_step_scalar(const GmStepBatch& b) {
    const std::size_t n = b.speed.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double s = ref::gm_blend(b.lambda[i], b.innovation[i], b.speed[i], b.mean_speed[i], b.speed_sigma[i],
                                       b.noise_speed[i]);
        b.speed[i] = ref::clamp_speed(s, b.max_speed[i]);
        const double d = ref::gm_blend(b.lambda[i], b.innovation[i], b.direction[i], b.mean_direction[i],
                                       b.direction_sigma[i], b.noise_direction[i]);
        b.direction[i] = ref::wrap_angle(d);
    }
}

void integrate_scalar(const IntegrateBatch& b) {
    const std::size_t n = b.x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = b.x[i] + b.speed[i] * b.cos_direction[i] * b.dt;
        const double y = b.y[i] + b.speed[i] * b.sin_direction[i] * b.dt;
        const auto fx = ref::fold(x, b.width);
        const auto fy = ref::fold(y, b.height);
        b.x[i] = fx.position;
        b.y[i] = fy.position;
        b.direction[i] = ref::reflect_direction(b.direction[i], fx.odd, fy.odd);
    }
}

void range_query_scalar(const RangeQuery& q) {
    const std::size_t n = q.x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = q.x[i] - q.px;
        const double dy = q.y[i] - q.py;
        const double d2 = dx * dx + dy * dy;
        q.dist_sq[i] = d2;
        q.within[i] = d2 <= q.radius_sq ? 1 : 0;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", &gm_step_scalar, &integrate_scalar, &range_query_scalar};
    return table;
}

void direction_cosines(std::span<const double> direction, std::span<double> cos_out, std::span<double> sin_out) {
    for (std::size_t i = 0; i < direction.size(); ++i) {
        cos_out[i] = std::cos(direction[i]);
        sin_out[i] = std::sin(direction[i]);
    }
}

}  // namespace cmanet::simd
