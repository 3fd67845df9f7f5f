#pragma once

// Independent reference computations. Nothing here calls into the cmanet
// core library; the routes are deliberately different (quadrature, Monte
// Carlo, brute-force enumeration, iteration) so they can check it.

#include <cstdint>
#include <functional>
#include <vector>

namespace cmanet::oracles {

/// Maclaurin series of erf truncated after `terms` terms.
double erf_taylor(double x, int terms = 30);

/// Adaptive Gauss-Kronrod (7/15) quadrature on [lo, hi].
double integrate(const std::function<double(double)>& f, double lo, double hi, double abs_tol = 1e-13,
                 int max_depth = 60);

/// Modified Bessel I0 by its power series.
double bessel_i0_series(double z);

/// log I0(z), summing the power series in log space around its largest term.
double log_bessel_i0_series(double z);

/// Q1(a,b) from its defining integral  int_b^inf x exp(-(x^2+a^2)/2) I0(ax) dx.
double marcum_q1_quadrature(double a, double b);

/// Chi-square density formed as x^(k/2-1) e^(-x/2), normalised by quadrature.
double chi_square_gamma_form(double dof, double x);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

/// Sample mean of exp(mu + sigma * N).
MonteCarloEstimate lognormal_mc_mean(double mu, double sigma, std::uint64_t n, std::uint64_t seed);

/// Sample mean of L given L > elapsed, L log-normal. Draws the underlying
/// normal directly from its truncated tail (exponential rejection for the
/// upper tail) so the estimate stays usable when survival is rare.
MonteCarloEstimate lognormal_conditional_mc_mean(double mu, double sigma, double elapsed, std::uint64_t n,
                                                 std::uint64_t seed);

/// Enumerates every (x, y, z) outcome and sums p log3(1/p).
double symbol_entropy_bruteforce(const std::vector<double>& px, const std::vector<double>& py,
                                 const std::vector<double>& pz);

using Matrix = std::vector<std::vector<double>>;

/// Stationary vector by power iteration on the lazy chain (I + P) / 2.
std::vector<double> stationary_power_iteration(const Matrix& p, int max_iter = 1'000'000);

/// sum_i pi_i * H(row_i), logarithm in the given base.
double chain_entropy_bruteforce(const Matrix& p, const std::vector<double>& pi, double log_base);

struct Reflection1d {
    double position = 0.0;
    bool flipped = false;
};

/// Walks a point across [0, length] one bounce at a time.
Reflection1d reflect_1d(double position, double displacement, double length);

}  // namespace cmanet::oracles
