#pragma once

#include <utility>

namespace cmanet::mobility {

/// Gauss-Markov parameters for one device. Angles are radians.
struct MobilityParams {
    double lambda = 0.75;
    double mean_speed = 10.0;
    double mean_direction = 0.0;
    double speed_sigma = 2.0;
    double direction_sigma = 0.5;
    double max_speed = 20.0;

    /// Throws Errc::InvalidArgument on a violated invariant.
    void validate() const;
};

struct Position {
    double x = 0.0;
    double y = 0.0;
};

struct MobilityState {
    Position position;
    double speed = 0.0;
    double direction = 0.0;
};

/// Axis-aligned [0, width] x [0, height] arena with reflecting walls.
struct Arena {
    double width = 1000.0;
    double height = 1000.0;

    bool contains(const Position& p) const noexcept {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

struct GaussianPair {
    double speed = 0.0;
    double direction = 0.0;
};

/// One Gauss-Markov update of speed and direction. Position is untouched.
///
///   speed'     = l*speed + (1-l)*mean_speed + sqrt(1-l^2)*speed_sigma*n1
///   direction' = l*dir   + (1-l)*mean_dir   + sqrt(1-l^2)*direction_sigma*n2
///
/// speed' is clamped to [0, max_speed]; direction' is wrapped to [0, 2pi).
MobilityState gm_step(const MobilityState& state, const MobilityParams& params, const GaussianPair& noise);

/// Straight-line advance by dt seconds, then reflection at the arena walls.
/// Each wall bounce mirrors the corresponding direction component.
MobilityState integrate_position(const MobilityState& state, double dt, const Arena& arena);

/// Wraps an angle to [0, 2pi).
double wrap_angle(double radians);

double degrees_to_radians(double degrees);

}  // namespace cmanet::mobility
