#pragma once
// geometry.hpp - element/block addressing and the slope-1/s line families.
//
// The universe of m = b^6 elements is cut into b^5 blocks of b elements.
// Blocks are grouped into b superblocks; each superblock lays its b^4 blocks
// out on a b^2 x b^2 integer grid. Superblock s (1-based) owns the family of
// lines of slope 1/s whose x-intercepts ("anchors") a satisfy
//
//     -s (b^2 - 1) <= a < b^2,
//
// and the grid point (x, y) lies on exactly the line with anchor x - s*y.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bitprobe {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Thrown for any address, ordinal or parameter outside its documented range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Scheme parameter b and the dimensions derived from it.
class Params {
public:
    /// Largest b whose universe b^6 still fits in 64 bits.
    static constexpr u64 kMaxB = 1625;

    explicit Params(u64 b);

    /// Smallest b with b^6 >= m (universes that are not sixth powers are
    /// padded; the padding elements are never members).
    static Params for_universe(u64 m);

    [[nodiscard]] u64 b() const noexcept { return b_; }
    [[nodiscard]] u64 grid_side() const noexcept { return b_ * b_; }
    [[nodiscard]] u64 blocks_per_superblock() const noexcept { return grid_side() * grid_side(); }
    [[nodiscard]] u64 num_superblocks() const noexcept { return b_; }
    [[nodiscard]] u64 num_blocks() const noexcept { return blocks_per_superblock() * b_; }
    [[nodiscard]] u64 universe_size() const noexcept { return num_blocks() * b_; }

    friend bool operator==(const Params&, const Params&) = default;

private:
    u64 b_;
};

/// Block (s, x, y): superblock s in [1, b], grid coordinates in [0, b^2).
struct BlockAddr {
    u64 s = 1;
    u64 x = 0;
    u64 y = 0;

    friend auto operator<=>(const BlockAddr&, const BlockAddr&) = default;
};

/// Element (s, x, y, i): a block plus the index i in [0, b) inside it.
struct ElementAddr {
    BlockAddr block;
    u64 i = 0;

    friend auto operator<=>(const ElementAddr&, const ElementAddr&) = default;
};

/// The line l_s(a, 0): slope 1/s through the x-axis point (a, 0).
struct LineRef {
    u64 s = 1;
    i64 anchor = 0;

    friend auto operator<=>(const LineRef&, const LineRef&) = default;
};

struct GridPoint {
    u64 x = 0;
    u64 y = 0;

    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

[[nodiscard]] bool is_valid(const Params& p, const BlockAddr& blk) noexcept;
[[nodiscard]] bool is_valid(const Params& p, const ElementAddr& e) noexcept;
[[nodiscard]] bool is_valid(const Params& p, const LineRef& l) noexcept;

void check_valid(const Params& p, const BlockAddr& blk);
void check_valid(const Params& p, const ElementAddr& e);
void check_valid(const Params& p, const LineRef& l);

/// Flat numbering n = (((s-1) b^2 + y) b^2 + x) b + i.
[[nodiscard]] ElementAddr element_from_ordinal(const Params& p, u64 n);
[[nodiscard]] u64 element_to_ordinal(const Params& p, const ElementAddr& e);

/// Dense block numbering (s-1) b^4 + y b^2 + x; the same layout as table A.
[[nodiscard]] u64 block_ordinal(const Params& p, const BlockAddr& blk) noexcept;
[[nodiscard]] BlockAddr block_from_ordinal(const Params& p, u64 n);

/// Line of superblock blk.s through the block's grid point.
[[nodiscard]] constexpr LineRef line_of(const BlockAddr& blk) noexcept {
    return {blk.s, static_cast<i64>(blk.x) - static_cast<i64>(blk.s) * static_cast<i64>(blk.y)};
}

/// Whether the grid point lies on the line (ignores which superblock owns it).
[[nodiscard]] constexpr bool on_line(const LineRef& l, u64 x, u64 y) noexcept {
    return static_cast<i64>(x) - static_cast<i64>(l.s) * static_cast<i64>(y) == l.anchor;
}

[[nodiscard]] i64 min_anchor(const Params& p, u64 s);
[[nodiscard]] i64 max_anchor(const Params& p, u64 s);

/// Grid points of the line ordered by increasing y. Never empty.
[[nodiscard]] std::vector<GridPoint> points_on_line(const Params& p, const LineRef& l);

/// |L_s| = (s + 1)(b^2 - 1) + 1.
[[nodiscard]] u64 num_lines(const Params& p, u64 s);

/// Dense index of l within L_s: anchor + s (b^2 - 1).
[[nodiscard]] u64 line_ordinal(const Params& p, const LineRef& l);
[[nodiscard]] LineRef line_from_ordinal(const Params& p, u64 s, u64 ordinal);

std::string to_string(const BlockAddr& blk);
std::string to_string(const ElementAddr& e);
std::string to_string(const LineRef& l);

} // namespace bitprobe
