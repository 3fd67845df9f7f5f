#include "cmanet/mobility.hpp"

#include <cmath>
#include <numbers>

#include "cmanet/error.hpp"
#include "cmanet/simd/elementwise.hpp"

namespace cmanet::mobility {

void MobilityParams::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(Errc::InvalidArgument, "mobility lambda must lie in [0, 1]");
    if (!(mean_speed >= 0.0)) throw Error(Errc::InvalidArgument, "mobility mean_speed must be >= 0");
    if (!(max_speed > 0.0)) throw Error(Errc::InvalidArgument, "mobility max_speed must be > 0");
    if (!(speed_sigma >= 0.0) || !(direction_sigma >= 0.0))
        throw Error(Errc::InvalidArgument, "mobility sigmas must be >= 0");
    if (!std::isfinite(mean_direction)) throw Error(Errc::InvalidArgument, "mobility mean_direction must be finite");
}

MobilityState gm_step(const MobilityState& state, const MobilityParams& params, const GaussianPair& noise) {
    const double innovation = std::sqrt(1.0 - params.lambda * params.lambda);
    MobilityState next = state;
    next.speed = simd::ref::clamp_speed(
        simd::ref::gm_blend(params.lambda, innovation, state.speed, params.mean_speed, params.speed_sigma, noise.speed),
        params.max_speed);
    next.direction = simd::ref::wrap_angle(simd::ref::gm_blend(params.lambda, innovation, state.direction,
                                                               params.mean_direction, params.direction_sigma,
                                                               noise.direction));
    return next;
}

MobilityState integrate_position(const MobilityState& state, double dt, const Arena& arena) {
    if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "integration step must be > 0");
    const double x = state.position.x + state.speed * std::cos(state.direction) * dt;
    const double y = state.position.y + state.speed * std::sin(state.direction) * dt;
    const auto fx = simd::ref::fold(x, arena.width);
    const auto fy = simd::ref::fold(y, arena.height);
    MobilityState next = state;
    next.position = {fx.position, fy.position};
    next.direction = simd::ref::reflect_direction(state.direction, fx.odd, fy.odd);
    return next;
}

double wrap_angle(double radians) { return simd::ref::wrap_angle(radians); }

double degrees_to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace cmanet::mobility
