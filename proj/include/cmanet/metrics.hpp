#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmanet/linkmodel.hpp"

namespace cmanet::metrics {

enum class LogBase { Two, Three, E };
double log_in(double x, LogBase base);

/// P_k proportional to 1 / I_k, normalised. Throws on an empty list or I_k <= 0.
std::vector<double> info_probability(std::span<const double> info_sizes);

/// Three independent outcome axes. Each must sum to 1 within 1e-9.
class SymbolDistribution {
public:
    SymbolDistribution(std::vector<double> px, std::vector<double> py, std::vector<double> pz);

    const std::array<std::vector<double>, 3>& axes() const noexcept { return axes_; }

private:
    std::array<std::vector<double>, 3> axes_;
};

/// Optional prefactors of the 3-D entropy: alpha_k / beta * chi-square(dof, x).
/// Each defaults to the neutral value, giving a weight of 1.
struct EntropyWeight {
    double alpha_k = 1.0;
    double beta = 1.0;
    std::optional<double> chi_dof;
    double chi_x = 0.0;

    double value() const;
};

/// weight * sum over (x,y,z) of Px Py Pz log3(1 / (Px Py Pz)).
double symbol_entropy(const SymbolDistribution& dist, double weight = 1.0);

/// Row-stochastic K x K matrix.
class TransitionMatrix {
public:
    /// Throws ValidationError on negative entries or rows not summing to 1 within 1e-9.
    explicit TransitionMatrix(std::vector<std::vector<double>> rows);

    /// Builds from transition counts; empty rows become self-loops.
    static TransitionMatrix from_counts(const std::vector<std::vector<double>>& counts);

    std::size_t dim() const noexcept { return rows_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

    /// Ordinary product followed by row renormalisation.
    TransitionMatrix compose(const TransitionMatrix& other) const;

    bool irreducible() const;

private:
    std::vector<std::vector<double>> rows_;
};

/// Shannon entropy of one probability vector.
double row_entropy(std::span<const double> row, LogBase base);

/// H = sum_i pi_i H(row_i). Throws Errc::DimensionMismatch when sizes differ
/// and Errc::InvalidArgument when pi does not sum to 1.
double chain_entropy(const TransitionMatrix& m, std::span<const double> stationary, LogBase base = LogBase::Two);

/// Solves pi = pi P with sum(pi) = 1. Throws Errc::Reducible unless every
/// state reaches every other.
std::vector<double> stationary_distribution(const TransitionMatrix& m);

struct Interval {
    double start = 0.0;  // t_{i-1}
    double end = 0.0;    // t_i
};

struct TransmissionParams {
    double epsilon_k = 1.0;
    int n_devices = 1;
    int info_units = 1;
    Interval interval{0.0, 1.0};

    void validate() const;
};

/// epsilon_k * n_devices * info_units / (t_i - t_{i-1}).
double transmission_index(const TransmissionParams& p);

enum class TransferStatus { InFlight, Delivered, Failed };
std::string_view to_string(TransferStatus s);

struct TransferRecord {
    std::uint64_t id = 0;
    std::string src;
    std::string dst;
    linkmodel::DataType type = linkmodel::DataType::Text;
    double size_bits = 0.0;
    double bits_delivered = 0.0;
    double start = 0.0;
    double end = 0.0;
    TransferStatus status = TransferStatus::InFlight;
};

using ThroughputByType = std::array<double, 4>;

/// Delivered bits per data type over `window` seconds, in Mbps. In-flight
/// records are ignored; failed records count their pro-rata bits.
ThroughputByType measure_throughput(std::span<const TransferRecord> log, double window);

/// Integral over t in [t_lo, t_hi] of
///   Q1( sqrt(2 g^2 / (1 - g^2)) * n / t,  sqrt(n / (1 - g^2)) * 2 g ),
/// for reporting only. gamma must lie in (0, 1).
double transmission_density_integral(int n_devices, double gamma, double t_lo, double t_hi);

}  // namespace cmanet::metrics
