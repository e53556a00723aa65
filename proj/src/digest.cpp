#include "wfchef/digest.hpp"

#include <openssl/evp.h>

#include "wfchef/error.hpp"

namespace wfchef {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string digest::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(size * 2);
    for (auto b : bytes_) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

digest digest::from_hex(std::string_view hex) {
    if (hex.size() != size * 2) throw parse_error("digest must have " + std::to_string(size * 2) + " hex digits");
    bytes_type bytes{};
    for (std::size_t i = 0; i < size; ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw parse_error("invalid hex digit in digest '" + std::string(hex) + "'");
        bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return digest(bytes);
}

std::uint64_t digest::prefix64() const noexcept {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | bytes_[i];
    return v;
}

digest_builder& digest_builder::tag(char t) {
    buffer_.push_back(t);
    return *this;
}

digest_builder& digest_builder::u64(std::uint64_t value) {
    for (int shift = 56; shift >= 0; shift -= 8) buffer_.push_back(static_cast<char>((value >> shift) & 0xff));
    return *this;
}

digest_builder& digest_builder::text(std::string_view s) {
    u64(s.size());
    buffer_.append(s);
    return *this;
}

digest_builder& digest_builder::token(const digest& d) {
    buffer_.append(reinterpret_cast<const char*>(d.bytes().data()), digest::size);
    return *this;
}

digest digest_builder::finish() const { return sha256(buffer_); }

digest sha256(std::string_view data) {
    digest::bytes_type out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != digest::size) {
        throw internal_error("SHA-256 computation failed");
    }
    return digest(out);
}

} // namespace wfchef
