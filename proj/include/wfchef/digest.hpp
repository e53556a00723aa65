#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace wfchef {

// 256-bit SHA-256 digest used for type hashes, pattern hashes and seed derivation.
class digest {
public:
    static constexpr std::size_t size = 32;
    using bytes_type = std::array<std::uint8_t, size>;

    digest() = default;
    explicit digest(const bytes_type& bytes) : bytes_(bytes) {}

    const bytes_type& bytes() const noexcept { return bytes_; }
    std::string hex() const;
    static digest from_hex(std::string_view hex); // throws parse_error

    // First eight bytes, big endian.
    std::uint64_t prefix64() const noexcept;

    friend auto operator<=>(const digest&, const digest&) = default;
    friend bool operator==(const digest&, const digest&) = default;

private:
    bytes_type bytes_{};
};

// Incremental builder for an unambiguous byte encoding. Every field is
// framed (tag or length prefix) so distinct field sequences never collide.
class digest_builder {
public:
    digest_builder& tag(char t);
    digest_builder& u64(std::uint64_t value);
    digest_builder& text(std::string_view s);      // length-prefixed
    digest_builder& token(const digest& d);        // fixed width
    digest finish() const;

    std::string_view encoding() const noexcept { return buffer_; }

private:
    std::string buffer_;
};

digest sha256(std::string_view data);

struct digest_hasher {
    std::size_t operator()(const digest& d) const noexcept { return static_cast<std::size_t>(d.prefix64()); }
};

} // namespace wfchef
