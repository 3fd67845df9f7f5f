#pragma once

// Per-element reference arithmetic shared by the scalar kernels and the
// single-device mobility functions. The AVX2 kernels reproduce these
// operations in the same order, with no fused multiply-add, so both paths
// are bit-identical.

#include <cmath>
#include <numbers>

namespace cmanet::simd::ref {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Semantics of maxpd / minpd: the second operand wins on ties and NaN.
inline double max_op(double a, double b) { return a > b ? a : b; }
inline double min_op(double a, double b) { return a < b ? a : b; }

inline double wrap_angle(double d) {
    double w = d - kTwoPi * std::floor(d / kTwoPi);
    if (w < 0.0) w = w + kTwoPi;
    if (!(w < kTwoPi)) w = 0.0;
    return w;
}

inline double gm_blend(double lambda, double innovation, double previous, double mean, double sigma,
                       double noise) {
    return lambda * previous + (1.0 - lambda) * mean + innovation * (sigma * noise);
}

inline double clamp_speed(double s, double max_speed) { return min_op(max_op(s, 0.0), max_speed); }

struct Folded {
    double position;
    bool odd;
};

// Reflecting fold of an unbounded coordinate into [0, length].
inline Folded fold(double x, double length) {
    const double q = std::floor(x / length);
    const double m = x - q * length;
    const double parity = q - 2.0 * std::floor(q / 2.0);
    const bool odd = parity != 0.0;
    double r = odd ? length - m : m;
    r = min_op(max_op(r, 0.0), length);
    return {r, odd};
}

inline double reflect_direction(double d, bool flip_x, bool flip_y) {
    if (flip_x) d = std::numbers::pi - d;
    if (flip_y) d = 0.0 - d;
    return wrap_angle(d);
}

}  // namespace cmanet::simd::ref
