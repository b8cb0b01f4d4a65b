#include "bitprobe/geometry.hpp"

#include <sstream>

namespace bitprobe {

namespace {

u64 pow6(u64 b) noexcept {
    u64 r = 1;
    for (int k = 0; k < 6; ++k) r *= b;
    return r;
}

void require_superblock(const Params& p, u64 s) {
    if (s < 1 || s > p.b())
        throw RangeError("superblock id " + std::to_string(s) + " outside [1, " +
                         std::to_string(p.b()) + "]");
}

} // namespace

Params::Params(u64 b) : b_(b) {
    if (b < 2)
        throw RangeError("block size b must be at least 2, got " + std::to_string(b));
    if (b > kMaxB)
        throw RangeError("block size b must be at most " + std::to_string(kMaxB) + ", got " +
                         std::to_string(b));
}

Params Params::for_universe(u64 m) {
    u64 b = 1;
    while (b <= kMaxB && pow6(b) < m) ++b;
    return Params(b);
}

bool is_valid(const Params& p, const BlockAddr& blk) noexcept {
    return blk.s >= 1 && blk.s <= p.b() && blk.x < p.grid_side() && blk.y < p.grid_side();
}

bool is_valid(const Params& p, const ElementAddr& e) noexcept {
    return is_valid(p, e.block) && e.i < p.b();
}

bool is_valid(const Params& p, const LineRef& l) noexcept {
    if (l.s < 1 || l.s > p.b()) return false;
    return l.anchor >= min_anchor(p, l.s) && l.anchor <= max_anchor(p, l.s);
}

void check_valid(const Params& p, const BlockAddr& blk) {
    if (!is_valid(p, blk))
        throw RangeError("block " + to_string(blk) + " outside superblocks [1, " +
                         std::to_string(p.b()) + "] x grid [0, " + std::to_string(p.grid_side()) +
                         ")^2");
}

void check_valid(const Params& p, const ElementAddr& e) {
    check_valid(p, e.block);
    if (e.i >= p.b())
        throw RangeError("index " + std::to_string(e.i) + " outside [0, " + std::to_string(p.b()) +
                         ")");
}

void check_valid(const Params& p, const LineRef& l) {
    require_superblock(p, l.s);
    if (!is_valid(p, l))
        throw RangeError("anchor " + std::to_string(l.anchor) + " outside [" +
                         std::to_string(min_anchor(p, l.s)) + ", " +
                         std::to_string(max_anchor(p, l.s)) + "] for slope 1/" +
                         std::to_string(l.s));
}

ElementAddr element_from_ordinal(const Params& p, u64 n) {
    if (n >= p.universe_size())
        throw RangeError("element ordinal " + std::to_string(n) + " not below universe size " +
                         std::to_string(p.universe_size()));
    const u64 side = p.grid_side();
    ElementAddr e;
    e.i = n % p.b();
    n /= p.b();
    e.block.x = n % side;
    n /= side;
    e.block.y = n % side;
    e.block.s = n / side + 1;
    return e;
}

u64 element_to_ordinal(const Params& p, const ElementAddr& e) {
    check_valid(p, e);
    return block_ordinal(p, e.block) * p.b() + e.i;
}

u64 block_ordinal(const Params& p, const BlockAddr& blk) noexcept {
    return ((blk.s - 1) * p.grid_side() + blk.y) * p.grid_side() + blk.x;
}

BlockAddr block_from_ordinal(const Params& p, u64 n) {
    if (n >= p.num_blocks())
        throw RangeError("block ordinal " + std::to_string(n) + " not below " +
                         std::to_string(p.num_blocks()));
    const u64 side = p.grid_side();
    return {n / p.blocks_per_superblock() + 1, n % side, (n / side) % side};
}

i64 min_anchor(const Params& p, u64 s) {
    return -static_cast<i64>(s) * static_cast<i64>(p.grid_side() - 1);
}

i64 max_anchor(const Params& p, u64) { return static_cast<i64>(p.grid_side()) - 1; }

std::vector<GridPoint> points_on_line(const Params& p, const LineRef& l) {
    check_valid(p, l);
    const i64 side = static_cast<i64>(p.grid_side());
    const i64 s = static_cast<i64>(l.s);
    std::vector<GridPoint> pts;
    // x = anchor + s*y must land in [0, side).
    for (i64 y = 0; y < side; ++y) {
        const i64 x = l.anchor + s * y;
        if (x >= side) break;
        if (x >= 0) pts.push_back({static_cast<u64>(x), static_cast<u64>(y)});
    }
    return pts;
}

u64 num_lines(const Params& p, u64 s) {
    require_superblock(p, s);
    return (s + 1) * (p.grid_side() - 1) + 1;
}

u64 line_ordinal(const Params& p, const LineRef& l) {
    check_valid(p, l);
    return static_cast<u64>(l.anchor - min_anchor(p, l.s));
}

LineRef line_from_ordinal(const Params& p, u64 s, u64 ordinal) {
    if (ordinal >= num_lines(p, s))
        throw RangeError("line ordinal " + std::to_string(ordinal) + " not below " +
                         std::to_string(num_lines(p, s)));
    return {s, min_anchor(p, s) + static_cast<i64>(ordinal)};
}

std::string to_string(const BlockAddr& blk) {
    std::ostringstream os;
    os << '(' << blk.s << ',' << blk.x << ',' << blk.y << ')';
    return os.str();
}

std::string to_string(const ElementAddr& e) {
    std::ostringstream os;
    os << '(' << e.block.s << ',' << e.block.x << ',' << e.block.y << ',' << e.i << ')';
    return os.str();
}

std::string to_string(const LineRef& l) {
    std::ostringstream os;
    os << "l_" << l.s << '(' << l.anchor << ",0)";
    return os.str();
}

} // namespace bitprobe
