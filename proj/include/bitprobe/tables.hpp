#pragma once
// tables.hpp - the three probe tables and their index layouts.
//
//   A: one bit per block,                       (s-1) b^4 + y b^2 + x
//   B: one block of b bits per line of L_s,     offset(s) + ordinal(l) b + i
//   C: one block of b bits per grid coordinate, (y b^2 + x) b + i
//
// B groups superblock 1's lines first, then superblock 2's, and so on.

#include "bitprobe/bit_table.hpp"
#include "bitprobe/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace bitprobe {

enum class Table : std::uint8_t { A, B, C };

[[nodiscard]] constexpr char table_name(Table t) noexcept {
    switch (t) {
    case Table::A: return 'A';
    case Table::B: return 'B';
    case Table::C: return 'C';
    }
    return '?';
}

/// Exact table lengths in bits.
[[nodiscard]] u64 table_a_bits(const Params& p) noexcept;
[[nodiscard]] u64 table_b_bits(const Params& p) noexcept;
[[nodiscard]] u64 table_c_bits(const Params& p) noexcept;
[[nodiscard]] inline u64 total_bits(const Params& p) noexcept {
    return table_a_bits(p) + table_b_bits(p) + table_c_bits(p);
}

/// Start of superblock s's lines in table B: sum over j < s of |L_j| * b.
[[nodiscard]] u64 b_offset(const Params& p, u64 s);

[[nodiscard]] u64 a_index(const Params& p, const BlockAddr& blk);
[[nodiscard]] u64 c_index(const Params& p, u64 x, u64 y, u64 i);
[[nodiscard]] u64 b_index(const Params& p, const LineRef& l, u64 i);

/// The built data structure: parameters plus tables A, B, C.
class Structure {
public:
    explicit Structure(const Params& p);
    Structure(const Params& p, BitTable a, BitTable b, BitTable c);

    [[nodiscard]] const Params& params() const noexcept { return params_; }

    [[nodiscard]] const BitTable& table(Table t) const noexcept;
    [[nodiscard]] BitTable& table(Table t) noexcept;

    [[nodiscard]] const BitTable& a() const noexcept { return a_; }
    [[nodiscard]] const BitTable& b() const noexcept { return b_; }
    [[nodiscard]] const BitTable& c() const noexcept { return c_; }

    // Probe-address helpers using the precomputed line offsets.
    [[nodiscard]] u64 a_pos(const BlockAddr& blk) const noexcept;
    [[nodiscard]] u64 b_pos(const LineRef& l, u64 i) const noexcept;
    [[nodiscard]] u64 c_pos(u64 x, u64 y, u64 i) const noexcept;

    friend bool operator==(const Structure& l, const Structure& r) {
        return l.params_ == r.params_ && l.a_ == r.a_ && l.b_ == r.b_ && l.c_ == r.c_;
    }

private:
    Params params_;
    std::vector<u64> line_offsets_; // indexed by s - 1
    BitTable a_, b_, c_;
};

/// Wire format errors, one kind per failure mode.
class FormatError : public std::runtime_error {
public:
    enum class Kind { BadMagic, VersionMismatch, BadParams, LengthMismatch, BadPadding, TrailingBytes };

    FormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

inline constexpr std::uint8_t kFormatVersion = 1;

/// "BP42", version byte, b (u64 LE), then A, B, C each as bit length (u64 LE)
/// followed by the packed payload bytes.
[[nodiscard]] std::vector<std::uint8_t> serialize(const Structure& st);
[[nodiscard]] Structure deserialize(std::span<const std::uint8_t> bytes);

void write_file(const std::string& path, const Structure& st);
[[nodiscard]] Structure read_file(const std::string& path);

} // namespace bitprobe
