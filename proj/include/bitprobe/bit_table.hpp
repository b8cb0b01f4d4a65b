#pragma once
// bit_table.hpp - fixed-length packed bit vector.
//
// Bit k lives in byte k / 8 at position k % 8 (least significant bit first),
// which is also the on-disk layout, so serialization is a plain byte copy.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bitprobe {

class BitTable {
public:
    BitTable() = default;
    explicit BitTable(std::uint64_t len) : len_(len), bytes_(byte_count(len), 0) {}

    static constexpr std::uint64_t byte_count(std::uint64_t len) noexcept { return (len + 7) / 8; }

    [[nodiscard]] std::uint64_t size() const noexcept { return len_; }

    [[nodiscard]] bool get(std::uint64_t k) const {
        check(k);
        return (bytes_[k >> 3] >> (k & 7)) & 1u;
    }

    void set(std::uint64_t k, bool v = true) {
        check(k);
        const auto mask = static_cast<std::uint8_t>(1u << (k & 7));
        if (v)
            bytes_[k >> 3] |= mask;
        else
            bytes_[k >> 3] &= static_cast<std::uint8_t>(~mask);
    }

    void flip(std::uint64_t k) {
        check(k);
        bytes_[k >> 3] ^= static_cast<std::uint8_t>(1u << (k & 7));
    }

    [[nodiscard]] std::uint64_t count() const noexcept {
        std::uint64_t n = 0;
        for (auto byte : bytes_) n += static_cast<std::uint64_t>(__builtin_popcount(byte));
        return n;
    }

    /// Positions of all set bits, ascending.
    [[nodiscard]] std::vector<std::uint64_t> set_positions() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t k = 0; k < len_; ++k)
            if ((bytes_[k >> 3] >> (k & 7)) & 1u) out.push_back(k);
        return out;
    }

    [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

    /// Adopts packed bytes; unused high bits of the last byte must be zero.
    static BitTable from_bytes(std::uint64_t len, std::span<const std::uint8_t> bytes) {
        if (bytes.size() != byte_count(len))
            throw std::invalid_argument("bit table of " + std::to_string(len) + " bits needs " +
                                        std::to_string(byte_count(len)) + " bytes, got " +
                                        std::to_string(bytes.size()));
        BitTable t;
        t.len_ = len;
        t.bytes_.assign(bytes.begin(), bytes.end());
        if (len % 8 != 0 && (t.bytes_.back() >> (len % 8)) != 0)
            throw std::invalid_argument("non-zero padding bits after bit " + std::to_string(len));
        return t;
    }

    friend bool operator==(const BitTable&, const BitTable&) = default;

private:
    void check(std::uint64_t k) const {
        if (k >= len_)
            throw std::out_of_range("bit " + std::to_string(k) + " outside table of " +
                                    std::to_string(len_) + " bits");
    }

    std::uint64_t len_ = 0;
    std::vector<std::uint8_t> bytes_;
};

} // namespace bitprobe
