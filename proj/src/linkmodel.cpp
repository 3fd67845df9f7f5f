#include "cmanet/linkmodel.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cmanet/error.hpp"

namespace cmanet::linkmodel {

std::string_view to_string(DataType t) {
    switch (t) {
        case DataType::Text: return "Text";
        case DataType::Image: return "Image";
        case DataType::Voice: return "Voice";
        case DataType::Video: return "Video";
    }
    return "?";
}

std::optional<DataType> parse_data_type(std::string_view s) {
    for (DataType t : kDataTypes)
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::string_view RangeClass::name() const noexcept {
    switch (label_) {
        case RangeLabel::R50: return "50m";
        case RangeLabel::R100: return "100m";
        case RangeLabel::R200: return "200m";
    }
    return "?";
}

std::optional<RangeClass> RangeClass::parse(std::string_view s) {
    if (s == "50m" || s == "50") return RangeClass(RangeLabel::R50);
    if (s == "100m" || s == "100") return RangeClass(RangeLabel::R100);
    if (s == "200m" || s == "200") return RangeClass(RangeLabel::R200);
    return std::nullopt;
}

std::optional<RangeClass> RangeClass::covering(double distance) {
    for (RangeLabel l : kRangeLabels) {
        const RangeClass rc(l);
        if (distance <= rc.radius()) return rc;
    }
    return std::nullopt;
}

std::string_view to_string(Channel c) { return c == Channel::WiFi ? "wifi" : "bluetooth"; }

std::optional<Channel> parse_channel(std::string_view s) {
    if (s == "wifi" || s == "WiFi") return Channel::WiFi;
    if (s == "bluetooth" || s == "Bluetooth") return Channel::Bluetooth;
    return std::nullopt;
}

RateTable RateTable::defaults() {
    Cells c{};
    c[0] = {10.0, 10.0, 10.0};  // Text
    c[1] = {8.1, 7.2, 6.8};     // Image
    c[2] = {8.5, 8.5, 8.2};     // Voice
    c[3] = {5.8, 4.0, 2.6};     // Video
    return RateTable(c);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

RateTable RateTable::parse_csv(std::string_view text) {
    Cells cells{};
    std::vector<std::string> problems;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const auto line = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line, ',');
        if (!header_seen) {
            header_seen = true;
            if (fields.size() != 3 || fields[0] != "data_type" || fields[1] != "range" || fields[2] != "mbps") {
                problems.push_back("line " + std::to_string(line_no) + ": expected header data_type,range,mbps");
            }
            continue;
        }
        if (fields.size() != 3) {
            problems.push_back("line " + std::to_string(line_no) + ": expected 3 fields");
            continue;
        }
        const auto type = parse_data_type(fields[0]);
        const auto range = RangeClass::parse(fields[1]);
        const auto rate = parse_double(fields[2]);
        if (!type) problems.push_back("line " + std::to_string(line_no) + ": unknown data type '" + std::string(fields[0]) + "'");
        if (!range) problems.push_back("line " + std::to_string(line_no) + ": unknown range '" + std::string(fields[1]) + "'");
        if (!rate) problems.push_back("line " + std::to_string(line_no) + ": bad rate '" + std::string(fields[2]) + "'");
        if (type && range && rate) {
            auto& cell = cells[static_cast<int>(*type)][static_cast<int>(range->label())];
            if (cell) problems.push_back("line " + std::to_string(line_no) + ": duplicate entry");
            cell = *rate;
        }
    }
    if (!header_seen) problems.push_back("empty rate table");
    RateTable table(cells);
    for (auto& v : table.violations()) problems.push_back(std::move(v));
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return table;
}

RateTable RateTable::load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open rate table " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

std::vector<std::string> RateTable::violations() const {
    std::vector<std::string> out;
    for (DataType t : kDataTypes) {
        const auto& row = cells_[static_cast<int>(t)];
        for (RangeLabel l : kRangeLabels) {
            const auto& cell = row[static_cast<int>(l)];
            const std::string where = std::string(to_string(t)) + "@" + std::string(RangeClass(l).name());
            if (!cell) {
                out.push_back("missing rate " + where);
            } else if (!(*cell > 0.0) || !std::isfinite(*cell)) {
                out.push_back("rate " + where + " must be > 0");
            }
        }
        for (int i = 0; i + 1 < 3; ++i) {
            if (row[i] && row[i + 1] && *row[i + 1] > *row[i]) {
                out.push_back("rate for " + std::string(to_string(t)) + " increases from " +
                              std::string(RangeClass(kRangeLabels[i]).name()) + " to " +
                              std::string(RangeClass(kRangeLabels[i + 1]).name()));
            }
        }
    }
    return out;
}

double RateTable::mbps(DataType type, RangeClass range) const {
    const auto& cell = cells_[static_cast<int>(type)][static_cast<int>(range.label())];
    if (!cell) throw Error(Errc::MissingEntry, "no rate for " + std::string(to_string(type)) + "@" + std::string(range.name()));
    return *cell;
}

std::string RateTable::to_csv() const {
    std::ostringstream os;
    os << "data_type,range,mbps\n";
    for (DataType t : kDataTypes)
        for (RangeLabel l : kRangeLabels) {
            const auto& cell = cells_[static_cast<int>(t)][static_cast<int>(l)];
            if (cell) os << to_string(t) << ',' << RangeClass(l).name() << ',' << *cell << '\n';
        }
    return os.str();
}

numerics::LogNormalParams default_lifetime_params() { return numerics::LogNormalParams(std::log(60.0), 0.6); }

bool link_exists(const mobility::Position& a, const mobility::Position& b, double radius) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    return dx * dx + dy * dy <= radius * radius;
}

bool link_exists(const mobility::Position& a, const mobility::Position& b, RangeClass range) {
    return link_exists(a, b, range.radius());
}

double session_life(const LinkLifetime& ll) {
    if (!(ll.elapsed >= 0.0)) throw Error(Errc::InvalidArgument, "link age must be >= 0");
    const double mean = numerics::lognormal_mean(ll.params);
    if (ll.elapsed == 0.0) return mean;
    const double sigma = ll.params.sigma();
    const double z = (std::log(ll.elapsed) - ll.params.mu()) / sigma;
    const double survival = 0.5 * numerics::erfc(z / std::numbers::sqrt2);
    if (!(survival >= 1e-300))
        throw Error(Errc::SurvivalUnderflow, "survival probability underflow at age " + std::to_string(ll.elapsed));
    const double partial = 0.5 * numerics::erfc((z - sigma) / std::numbers::sqrt2);
    return std::max(mean * (partial / survival), ll.elapsed);
}

double remaining_life(const LinkLifetime& ll) { return session_life(ll) - ll.elapsed; }

void ConnectivityArgs::validate() const {
    if (n_devices <= 0 || !(sigma > 0.0) || !(alpha > 0.0))
        throw Error(Errc::InvalidArgument, "connectivity arguments must be strictly positive");
}

double connectivity_prob(const ConnectivityArgs& args) {
    args.validate();
    const double q = numerics::marcum_q1(
        numerics::MarcumArgs(std::sqrt(args.sigma), std::sqrt(static_cast<double>(args.n_devices) / args.alpha)));
    return std::clamp(1.0 - q, 0.0, 1.0);
}

double transfer_duration_at(double size_bits, double mbps, double overhead) {
    if (!(size_bits > 0.0)) throw Error(Errc::InvalidArgument, "payload size must be > 0");
    if (!(overhead >= 0.0 && overhead <= 0.5)) throw Error(Errc::InvalidArgument, "overhead must lie in [0, 0.5]");
    if (!(mbps > 0.0)) throw Error(Errc::InvalidArgument, "rate must be > 0");
    return size_bits / (mbps * 1e6 * (1.0 - overhead));
}

double transfer_duration(double size_bits, DataType type, RangeClass range, const RateTable& table, double overhead) {
    return transfer_duration_at(size_bits, table.mbps(type, range), overhead);
}

}  // namespace cmanet::linkmodel
