#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cmanet/mobility.hpp"
#include "cmanet/numerics.hpp"

namespace cmanet::linkmodel {

enum class DataType { Text = 0, Image = 1, Voice = 2, Video = 3 };
inline constexpr std::array<DataType, 4> kDataTypes{DataType::Text, DataType::Image, DataType::Voice,
                                                    DataType::Video};

std::string_view to_string(DataType t);
std::optional<DataType> parse_data_type(std::string_view s);

enum class RangeLabel { R50 = 0, R100 = 1, R200 = 2 };
inline constexpr std::array<RangeLabel, 3> kRangeLabels{RangeLabel::R50, RangeLabel::R100, RangeLabel::R200};

/// One of the three tested Wi-Fi ranges. The radius is fixed by the label.
class RangeClass {
public:
    explicit constexpr RangeClass(RangeLabel label) : label_(label) {}

    constexpr RangeLabel label() const noexcept { return label_; }
    constexpr double radius() const noexcept {
        switch (label_) {
            case RangeLabel::R50: return 50.0;
            case RangeLabel::R100: return 100.0;
            case RangeLabel::R200: return 200.0;
        }
        return 0.0;
    }
    std::string_view name() const noexcept;

    static std::optional<RangeClass> parse(std::string_view s);
    /// Smallest class whose radius covers `distance`; nullopt beyond 200 m.
    static std::optional<RangeClass> covering(double distance);

    friend constexpr bool operator==(RangeClass a, RangeClass b) { return a.label_ == b.label_; }

private:
    RangeLabel label_;
};

/// Discovery channel. Bluetooth is a short synthetic channel (10 m, Text only).
enum class Channel { WiFi, Bluetooth };
inline constexpr double kBluetoothRadius = 10.0;
inline constexpr double kBluetoothTextMbps = 1.0;

std::string_view to_string(Channel c);
std::optional<Channel> parse_channel(std::string_view s);

/// Per data type, per range class throughput in Mbps.
class RateTable {
public:
    /// Measured values: 50 m / 100 m / 200 m.
    static RateTable defaults();

    /// Reads CSV with header `data_type,range,mbps`. Throws ValidationError
    /// listing every problem (missing cells, non-positive or increasing rates).
    static RateTable load_csv(const std::filesystem::path& path);
    static RateTable parse_csv(std::string_view text);

    double mbps(DataType type, RangeClass range) const;
    std::string to_csv() const;

    /// Empty when the table satisfies every invariant.
    std::vector<std::string> violations() const;

private:
    using Cells = std::array<std::array<std::optional<double>, 3>, 4>;
    explicit RateTable(Cells cells) : cells_(cells) {}
    Cells cells_{};
};

struct LinkLifetime {
    numerics::LogNormalParams params;
    double elapsed = 0.0;
};

/// Link duration defaults: median 60 s.
numerics::LogNormalParams default_lifetime_params();

/// Inclusive range test: distance <= radius, evaluated as dx^2 + dy^2 <= r^2.
bool link_exists(const mobility::Position& a, const mobility::Position& b, double radius);
bool link_exists(const mobility::Position& a, const mobility::Position& b, RangeClass range);

/// E[L | L > elapsed] for log-normal L:
///   exp(mu + sigma^2/2) * erfc((z - sigma)/sqrt2) / erfc(z/sqrt2),  z = (ln elapsed - mu)/sigma.
/// Throws Errc::SurvivalUnderflow when P(L > elapsed) < 1e-300.
double session_life(const LinkLifetime& ll);

/// E[L - elapsed | L > elapsed].
double remaining_life(const LinkLifetime& ll);

struct ConnectivityArgs {
    int n_devices = 1;
    double sigma = 1.0;
    double alpha = 1.0;

    void validate() const;
};

/// 1 - Q1(sqrt(sigma), sqrt(n_devices / alpha)).
double connectivity_prob(const ConnectivityArgs& args);

/// size / (rate * 1e6 * (1 - overhead)) seconds. overhead must be in [0, 0.5].
double transfer_duration(double size_bits, DataType type, RangeClass range, const RateTable& table, double overhead);

/// Same, for an explicit rate (Bluetooth or custom channels).
double transfer_duration_at(double size_bits, double mbps, double overhead);

}  // namespace cmanet::linkmodel
