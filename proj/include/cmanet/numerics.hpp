#pragma once

// Special functions used by the link and metrics math. All pure.

namespace cmanet::numerics {

/// Log-scale parameters of a log-normal link duration (seconds).
class LogNormalParams {
public:
    /// Throws Errc::InvalidArgument unless sigma > 0 and mu is finite.
    LogNormalParams(double mu, double sigma);

    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }

private:
    double mu_;
    double sigma_;
};

/// Arguments of the first-order Marcum Q function. Both must be >= 0.
class MarcumArgs {
public:
    MarcumArgs(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

private:
    double a_;
    double b_;
};

double erf(double x);
double erfc(double x);

/// Q1(a, b) = P(R > b) for R Rician with noncentrality a and unit scale.
///
/// Evaluated from the modified-Bessel series
///     Q1(a,b) = exp(-(a^2+b^2)/2) * sum_k (a/b)^k I_k(ab)
/// after expanding each I_k in its own power series and regrouping, which
/// gives the Poisson mixture
///     Q1(a,b) = sum_k Pois(k; a^2/2) * P(Pois(b^2/2) <= k).
/// Every term is non-negative, so there is no cancellation. Summation stops
/// once a term past the Poisson mode is below 1e-15 of the running total.
double marcum_q1(const MarcumArgs& args);

/// exp(mu + sigma^2 / 2). Throws Errc::Overflow when the result is not finite.
double lognormal_mean(const LogNormalParams& p);

/// Chi-square probability density with `dof` degrees of freedom at x.
/// Throws Errc::InvalidArgument for dof <= 0 or x < 0.
double chi_square_weight(double dof, double x);

}  // namespace cmanet::numerics
