#include "cmanet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cmanet/error.hpp"

namespace cmanet::numerics {

LogNormalParams::LogNormalParams(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!std::isfinite(mu)) throw Error(Errc::InvalidArgument, "log-normal mu must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw Error(Errc::InvalidArgument, "log-normal sigma must be > 0");
}

MarcumArgs::MarcumArgs(double a, double b) : a_(a), b_(b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw Error(Errc::InvalidArgument, "Marcum-Q arguments must be finite and >= 0");
}

// glibc's erf/erfc are fdlibm rational approximations, accurate to about
// one ulp over the whole real line.
double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

namespace {

double log_poisson_pmf(int k, double mean, double log_mean) {
    return static_cast<double>(k) * log_mean - mean - std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

double marcum_q1(const MarcumArgs& args) {
    const double a = args.a();
    const double b = args.b();
    if (b == 0.0) return 1.0;
    if (a == 0.0) return std::exp(-0.5 * b * b);
    // Q1 behaves like the Gaussian tail at (b - a); 40 standard deviations
    // is far below the smallest normal double.
    if (b - a > 40.0) return 0.0;
    if (a - b > 40.0) return 1.0;

    const double mix_mean = 0.5 * a * a;
    const double tail_mean = 0.5 * b * b;
    const double log_mix = std::log(mix_mean);
    const double log_tail = std::log(tail_mean);

    // Mixture weights below this index are negligible; the cumulative of the
    // second Poisson still has to be accumulated from zero.
    const int k_lo = static_cast<int>(std::max(0.0, std::floor(mix_mean - 40.0 * std::sqrt(mix_mean) - 40.0)));

    double cdf = 0.0;
    for (int j = 0; j < k_lo; ++j) cdf += std::exp(log_poisson_pmf(j, tail_mean, log_tail));

    double sum = 0.0;
    double prev = 0.0;
    for (int k = k_lo;; ++k) {
        cdf += std::exp(log_poisson_pmf(k, tail_mean, log_tail));
        const double weight = std::exp(log_poisson_pmf(k, mix_mean, log_mix));
        const double term = weight * std::min(cdf, 1.0);
        sum += term;
        if (static_cast<double>(k) > mix_mean) {
            // Terms are log-concave in k, so once they fall they keep falling.
            if (term <= prev && term < 1e-15 * sum) break;
            // cdf <= 1, so the rest is bounded by the mixture's own tail,
            // which past the mode is at most weight / (1 - mean / (k + 1)).
            const double rest = weight / (1.0 - mix_mean / (static_cast<double>(k) + 1.0));
            if (rest <= 1e-16 * sum || rest < std::numeric_limits<double>::min()) break;
        }
        prev = term;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double lognormal_mean(const LogNormalParams& p) {
    const double exponent = p.mu() + 0.5 * p.sigma() * p.sigma();
    const double result = std::exp(exponent);
    if (!std::isfinite(result))
        throw Error(Errc::Overflow, "log-normal mean overflows (exponent " + std::to_string(exponent) + ")");
    return result;
}

double chi_square_weight(double dof, double x) {
    if (!(dof > 0.0) || !std::isfinite(dof)) throw Error(Errc::InvalidArgument, "chi-square dof must be > 0");
    if (!(x >= 0.0)) throw Error(Errc::InvalidArgument, "chi-square argument must be >= 0");
    const double half = 0.5 * dof;
    if (x == 0.0) {
        if (dof == 2.0) return 0.5;
        return dof > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const double log_density =
        (half - 1.0) * std::log(x) - 0.5 * x - half * std::numbers::ln2 - std::lgamma(half);
    return std::exp(log_density);
}

}  // namespace cmanet::numerics
