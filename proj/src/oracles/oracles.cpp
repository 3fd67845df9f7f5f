#include "cmanet/oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace cmanet::oracles {

double erf_taylor(double x, int terms) {
    // erf(x) = 2/sqrt(pi) * sum_n (-1)^n x^(2n+1) / (n! (2n+1))
    double sum = 0.0;
    double power = x;  // (-1)^n x^(2n+1) / n!
    for (int n = 0; n < terms; ++n) {
        sum += power / (2.0 * n + 1.0);
        power *= -x * x / (n + 1.0);
    }
    return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

namespace {

constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double kronrod;
    double error;
};

Panel gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

double integrate_rec(const std::function<double(double)>& f, double lo, double hi, double tol, int depth,
                     const Panel& whole) {
    if (depth <= 0 || whole.error <= tol) return whole.kronrod;
    const double mid = 0.5 * (lo + hi);
    const Panel left = gk15(f, lo, mid);
    const Panel right = gk15(f, mid, hi);
    if (std::abs(left.kronrod + right.kronrod - whole.kronrod) <= 0.1 * tol && left.error + right.error <= tol)
        return left.kronrod + right.kronrod;
    return integrate_rec(f, lo, mid, 0.5 * tol, depth - 1, left) +
           integrate_rec(f, mid, hi, 0.5 * tol, depth - 1, right);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double abs_tol, int max_depth) {
    if (hi <= lo) return 0.0;
    return integrate_rec(f, lo, hi, abs_tol, max_depth, gk15(f, lo, hi));
}

double bessel_i0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 10000; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

double log_bessel_i0_series(double z) {
    if (z == 0.0) return 0.0;
    // log t_k = 2k log(z/2) - 2 log(k!); terms peak near k = z/2.
    const double lz = std::log(0.5 * z);
    auto log_term = [lz](int k) { return 2.0 * k * lz - 2.0 * std::lgamma(k + 1.0); };
    const int peak = static_cast<int>(0.5 * z);
    const double top = log_term(peak);
    double sum = 0.0;
    for (int k = peak; k >= 0; --k) {
        const double t = std::exp(log_term(k) - top);
        sum += t;
        if (t < 1e-18) break;
    }
    for (int k = peak + 1;; ++k) {
        const double t = std::exp(log_term(k) - top);
        sum += t;
        if (t < 1e-18) break;
    }
    return top + std::log(sum);
}

double marcum_q1_quadrature(double a, double b) {
    auto integrand = [a](double x) {
        if (x <= 0.0) return 0.0;
        return std::exp(std::log(x) - 0.5 * (x * x + a * a) + log_bessel_i0_series(a * x));
    };
    const double upper = std::max(a, b) + 12.0;
    // Split at the peak of the Rician density so each panel is smooth.
    if (b < a) return integrate(integrand, b, a, 1e-12) + integrate(integrand, a, upper, 1e-12);
    return integrate(integrand, b, upper, 1e-12);
}

double chi_square_gamma_form(double dof, double x) {
    const double k = 0.5 * dof;
    auto kernel = [k](double t) { return t <= 0.0 ? 0.0 : std::pow(t, k - 1.0) * std::exp(-0.5 * t); };
    // Substitute t = s^2 near zero so x^(k-1) singularities become integrable smoothly.
    auto smoothed = [&](double s) { return 2.0 * s * kernel(s * s); };
    const double cut = 4.0;
    const double norm = integrate(smoothed, 0.0, std::sqrt(cut), 1e-15) + integrate(kernel, cut, 60.0 * dof + 200.0, 1e-15);
    return kernel(x) / norm;
}

MonteCarloEstimate lognormal_mc_mean(double mu, double sigma, std::uint64_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 1; i <= n; ++i) {
        const double v = std::exp(mu + sigma * normal(rng));
        const double delta = v - mean;
        mean += delta / static_cast<double>(i);
        m2 += delta * (v - mean);
    }
    const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

namespace {

// Wichura's AS241 (PPND16): lower-tail normal quantile, about 1e-16 relative.
// Takes the tail probability p <= 0.5 and returns -Phi^{-1}(p) >= 0 when
// called through upper_quantile below.
double ppnd16(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        v = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                 1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                 0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                 0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -v : v;
}

// x with P(X > x) = p for standard normal X, accurate for tiny p.
double upper_quantile(double p) { return -ppnd16(p); }

}  // namespace

MonteCarloEstimate lognormal_conditional_mc_mean(double mu, double sigma, double elapsed, std::uint64_t n,
                                                 std::uint64_t seed) {
    // Inverse-CDF sampling of the upper tail: draw q uniform on (0, P(Z > z))
    // and map it back, so no sample is ever rejected.
    const double z = elapsed > 0.0 ? (std::log(elapsed) - mu) / sigma : -INFINITY;
    const double tail = 0.5 * std::erfc(z / std::numbers::sqrt2);
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double w = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        const double v = std::exp(mu + sigma * upper_quantile(w * tail));
        sum += v;
        sum_sq += v * v;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0)) : 0.0;
    return {mean, std::sqrt(var / nn), n};
}

double symbol_entropy_bruteforce(const std::vector<double>& px, const std::vector<double>& py,
                                 const std::vector<double>& pz) {
    double h = 0.0;
    for (double x : px)
        for (double y : py)
            for (double zz : pz) {
                const double p = x * y * zz;
                if (p > 0.0) h -= p * std::log(p);
            }
    return h / std::log(3.0);
}

std::vector<double> stationary_power_iteration(const Matrix& p, int max_iter) {
    const std::size_t k = p.size();
    std::vector<double> pi(k, 1.0 / static_cast<double>(k));
    std::vector<double> next(k);
    for (int it = 0; it < max_iter; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            next[i] += 0.5 * pi[i];
            for (std::size_t j = 0; j < k; ++j) next[j] += 0.5 * pi[i] * p[i][j];
        }
        double diff = 0.0;
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) total += next[j];
        for (std::size_t j = 0; j < k; ++j) {
            next[j] /= total;
            diff = std::max(diff, std::abs(next[j] - pi[j]));
        }
        pi.swap(next);
        if (diff < 1e-16) break;
    }
    return pi;
}

double chain_entropy_bruteforce(const Matrix& p, const std::vector<double>& pi, double log_base) {
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double row = 0.0;
        for (double v : p[i])
            if (v > 0.0) row += v * std::log(1.0 / v);
        h += pi[i] * row;
    }
    return h / std::log(log_base);
}

Reflection1d reflect_1d(double position, double displacement, double length) {
    if (length <= 0.0) throw std::invalid_argument("length must be positive");
    Reflection1d out{position, false};
    double remaining = displacement;
    // Move to a wall, bounce, repeat.
    while (remaining != 0.0) {
        const double wall = remaining > 0.0 ? length : 0.0;
        const double room = wall - out.position;
        if (std::abs(remaining) <= std::abs(room)) {
            out.position += remaining;
            break;
        }
        out.position = wall;
        remaining = -(remaining - room);
        out.flipped = !out.flipped;
    }
    return out;
}

}  // namespace cmanet::oracles
