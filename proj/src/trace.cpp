#include "cmanet/trace.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include "cmanet/error.hpp"

namespace cmanet {

void Trace::emit(double t, std::string_view event, std::string_view src, std::string_view dst, Json detail) {
    Json line = Json::object();
    line["t"] = t;
    line["event"] = event;
    line["src"] = src;
    line["dst"] = dst;
    line["detail"] = std::move(detail);
    bytes_ += line.dump();
    bytes_ += '\n';
    ++lines_;
}

std::string Trace::sha256_hex() const { return cmanet::sha256_hex(bytes_); }

void Trace::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write trace to " + path.string());
    out.write(bytes_.data(), static_cast<std::streamsize>(bytes_.size()));
    if (!out) throw Error(Errc::Io, "short write to " + path.string());
}

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw Error(Errc::Io, "SHA-256 computation failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::vector<TraceLine> parse_trace(std::string_view bytes) {
    std::vector<TraceLine> out;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < bytes.size()) {
        auto end = bytes.find('\n', start);
        if (end == std::string_view::npos) end = bytes.size();
        const auto text = bytes.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (text.empty()) continue;
        try {
            auto j = Json::parse(text);
            out.push_back(TraceLine{j.at("t").get<double>(), j.at("event").get<std::string>(),
                                    j.at("src").get<std::string>(), j.at("dst").get<std::string>(),
                                    std::move(j.at("detail"))});
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError({"trace line " + std::to_string(line_no) + ": " + e.what()});
        }
    }
    return out;
}

}  // namespace cmanet
