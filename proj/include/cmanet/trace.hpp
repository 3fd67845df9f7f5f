#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cmanet {

using Json = nlohmann::ordered_json;

/// One run-trace record: {"t","event","src","dst","detail"}.
struct TraceLine {
    double t = 0.0;
    std::string event;
    std::string src;
    std::string dst;
    Json detail;
};

/// Append-only JSON-lines trace held in memory. The bytes are canonical:
/// fixed key order, shortest round-trip number formatting, one '\n' per line.
class Trace {
public:
    void emit(double t, std::string_view event, std::string_view src = {}, std::string_view dst = {},
              Json detail = Json::object());

    const std::string& bytes() const noexcept { return bytes_; }
    std::size_t line_count() const noexcept { return lines_; }
    std::string sha256_hex() const;

    void write(const std::filesystem::path& path) const;

private:
    std::string bytes_;
    std::size_t lines_ = 0;
};

std::string sha256_hex(std::string_view data);

/// Parses JSON-lines trace bytes. Throws Errc::Validation on malformed lines.
std::vector<TraceLine> parse_trace(std::string_view bytes);

}  // namespace cmanet
