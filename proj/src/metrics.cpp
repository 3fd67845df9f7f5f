#include "cmanet/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "cmanet/error.hpp"
#include "cmanet/numerics.hpp"

namespace cmanet::metrics {

double log_in(double x, LogBase base) {
    switch (base) {
        case LogBase::Two: return std::log2(x);
        case LogBase::Three: return std::log(x) / std::log(3.0);
        case LogBase::E: return std::log(x);
    }
    return std::log(x);
}

std::vector<double> info_probability(std::span<const double> info_sizes) {
    if (info_sizes.empty()) throw Error(Errc::InvalidArgument, "info_probability needs at least one size");
    std::vector<double> inv;
    inv.reserve(info_sizes.size());
    for (double s : info_sizes) {
        if (!(s > 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidArgument, "information sizes must be > 0");
        inv.push_back(1.0 / s);
    }
    const double total = std::accumulate(inv.begin(), inv.end(), 0.0);
    for (double& v : inv) v /= total;
    return inv;
}

SymbolDistribution::SymbolDistribution(std::vector<double> px, std::vector<double> py, std::vector<double> pz)
    : axes_{std::move(px), std::move(py), std::move(pz)} {
    std::vector<std::string> problems;
    const char* names[3] = {"X", "Y", "Z"};
    for (int a = 0; a < 3; ++a) {
        const auto& axis = axes_[a];
        if (axis.empty()) {
            problems.push_back(std::string("axis ") + names[a] + " is empty");
            continue;
        }
        double sum = 0.0;
        for (double p : axis) {
            if (!(p >= 0.0)) problems.push_back(std::string("axis ") + names[a] + " has a negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) problems.push_back(std::string("axis ") + names[a] + " does not sum to 1");
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

double EntropyWeight::value() const {
    if (!(alpha_k >= 0.0) || !(beta > 0.0)) throw Error(Errc::InvalidArgument, "entropy weight needs alpha_k >= 0, beta > 0");
    double w = alpha_k / beta;
    if (chi_dof) w *= numerics::chi_square_weight(*chi_dof, chi_x);
    return w;
}

double symbol_entropy(const SymbolDistribution& dist, double weight) {
    if (!(weight >= 0.0)) throw Error(Errc::InvalidArgument, "entropy weight must be >= 0");
    const auto& [px, py, pz] = dist.axes();
    const double ln3 = std::log(3.0);
    // The axes are independent, so the joint entropy is the sum of the marginals.
    auto axis = [ln3](const std::vector<double>& p) {
        double h = 0.0;
        for (double v : p)
            if (v > 0.0) h += v * (std::log(1.0 / v) / ln3);
        return h;
    };
    const double h = axis(px) + axis(py) + axis(pz);
    return weight * h;
}

TransitionMatrix::TransitionMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    std::vector<std::string> problems;
    const std::size_t k = rows_.size();
    if (k == 0) problems.emplace_back("transition matrix is empty");
    for (std::size_t i = 0; i < k; ++i) {
        if (rows_[i].size() != k) {
            problems.push_back("row " + std::to_string(i) + " has " + std::to_string(rows_[i].size()) +
                               " entries, expected " + std::to_string(k));
            continue;
        }
        double sum = 0.0;
        for (double v : rows_[i]) {
            if (!(v >= 0.0)) problems.push_back("row " + std::to_string(i) + " has a negative entry");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) problems.push_back("row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

TransitionMatrix TransitionMatrix::from_counts(const std::vector<std::vector<double>>& counts) {
    std::vector<std::vector<double>> rows = counts;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double total = std::accumulate(rows[i].begin(), rows[i].end(), 0.0);
        if (total > 0.0) {
            for (double& v : rows[i]) v /= total;
        } else {
            std::fill(rows[i].begin(), rows[i].end(), 0.0);
            rows[i][i] = 1.0;
        }
    }
    return TransitionMatrix(std::move(rows));
}

TransitionMatrix TransitionMatrix::compose(const TransitionMatrix& other) const {
    if (other.dim() != dim()) throw Error(Errc::DimensionMismatch, "cannot compose matrices of different size");
    const std::size_t k = dim();
    std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t m = 0; m < k; ++m) {
            const double a = rows_[i][m];
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) out[i][j] += a * other.rows_[m][j];
        }
        const double total = std::accumulate(out[i].begin(), out[i].end(), 0.0);
        for (double& v : out[i]) v /= total;
    }
    return TransitionMatrix(std::move(out));
}

bool TransitionMatrix::irreducible() const {
    const std::size_t k = dim();
    auto reach_all = [&](bool forward) {
        std::vector<char> seen(k, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < k; ++j) {
                const double w = forward ? rows_[i][j] : rows_[j][i];
                if (w > 0.0 && !seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    // Strongly connected iff state 0 reaches all and is reached by all.
    return reach_all(true) && reach_all(false);
}

double row_entropy(std::span<const double> row, LogBase base) {
    double h = 0.0;
    for (double p : row)
        if (p > 0.0) h -= p * std::log(p);
    switch (base) {
        case LogBase::Two: return h / std::numbers::ln2;
        case LogBase::Three: return h / std::log(3.0);
        case LogBase::E: return h;
    }
    return h;
}

double chain_entropy(const TransitionMatrix& m, std::span<const double> stationary, LogBase base) {
    if (stationary.size() != m.dim())
        throw Error(Errc::DimensionMismatch, "stationary vector has " + std::to_string(stationary.size()) +
                                                 " entries, matrix has " + std::to_string(m.dim()) + " states");
    const double total = std::accumulate(stationary.begin(), stationary.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "stationary vector must sum to 1");
    double h = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) h += stationary[i] * row_entropy(m.rows()[i], base);
    return h;
}

std::vector<double> stationary_distribution(const TransitionMatrix& m) {
    if (!m.irreducible()) throw Error(Errc::Reducible, "transition matrix is reducible; stationary vector not unique");
    const auto k = static_cast<Eigen::Index>(m.dim());
    // (P^T - I) pi = 0 with one balance equation swapped for sum(pi) = 1.
    Eigen::MatrixXd a(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) a(i, j) = m(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) - (i == j ? 1.0 : 0.0);
    a.row(k - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(k - 1) = 1.0;
    const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
    std::vector<double> out(pi.data(), pi.data() + k);
    for (double& v : out) v = std::max(v, 0.0);
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& v : out) v /= total;
    return out;
}

void TransmissionParams::validate() const {
    if (!(epsilon_k > 0.0 && epsilon_k <= 1.0)) throw Error(Errc::InvalidArgument, "epsilon_k must lie in (0, 1]");
    if (n_devices <= 0) throw Error(Errc::InvalidArgument, "n_devices must be positive");
    if (info_units <= 0) throw Error(Errc::InvalidArgument, "info_units must be positive");
    if (!(interval.end >= interval.start)) throw Error(Errc::InvalidArgument, "interval must be ordered");
    if (interval.end == interval.start) throw Error(Errc::InvalidArgument, "interval has zero length");
}

double transmission_index(const TransmissionParams& p) {
    p.validate();
    return p.epsilon_k * static_cast<double>(p.n_devices) * static_cast<double>(p.info_units) /
           (p.interval.end - p.interval.start);
}

std::string_view to_string(TransferStatus s) {
    switch (s) {
        case TransferStatus::InFlight: return "in_flight";
        case TransferStatus::Delivered: return "delivered";
        case TransferStatus::Failed: return "failed";
    }
    return "?";
}

ThroughputByType measure_throughput(std::span<const TransferRecord> log, double window) {
    if (!(window > 0.0)) throw Error(Errc::InvalidArgument, "throughput window must be > 0");
    ThroughputByType bits{};
    for (const auto& r : log) {
        if (r.status == TransferStatus::InFlight) continue;
        bits[static_cast<int>(r.type)] += r.bits_delivered;
    }
    for (double& b : bits) b = b / window / 1e6;
    return bits;
}

namespace {

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double transmission_density_integral(int n_devices, double gamma, double t_lo, double t_hi) {
    if (n_devices <= 0) throw Error(Errc::InvalidArgument, "n_devices must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw Error(Errc::InvalidArgument, "gamma must lie in (0, 1)");
    if (!(t_lo > 0.0 && t_hi > t_lo)) throw Error(Errc::InvalidArgument, "time window must satisfy 0 < t_lo < t_hi");
    const double n = static_cast<double>(n_devices);
    const double g2 = gamma * gamma;
    const double a_scale = std::sqrt(2.0 * g2 / (1.0 - g2)) * n;
    const double b = std::sqrt(n / (1.0 - g2)) * 2.0 * gamma;
    auto f = [&](double t) { return numerics::marcum_q1(numerics::MarcumArgs(a_scale / t, b)); };
    const double fa = f(t_lo);
    const double fb = f(t_hi);
    const double fm = f(0.5 * (t_lo + t_hi));
    const double whole = (t_hi - t_lo) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, t_lo, t_hi, fa, fm, fb, whole, 1e-10, 40);
}

}  // namespace cmanet::metrics
