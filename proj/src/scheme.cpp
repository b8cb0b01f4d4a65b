#include "bitprobe/scheme.hpp"

#include <algorithm>
#include <set>

namespace bitprobe {

namespace {

bool same_coords(const BlockAddr& u, const BlockAddr& v) noexcept { return u.x == v.x && u.y == v.y; }

bool contains_sorted(const std::vector<BlockAddr>& v, const BlockAddr& blk) {
    return std::binary_search(v.begin(), v.end(), blk);
}

// The only empty block that can be B-blocked by u and C-blocked by v is the
// block of u's superblock sitting at v's coordinates, if it lies on u's line.
std::optional<BlockAddr> both_blocked_candidate(const BlockAddr& u, const BlockAddr& v) noexcept {
    if (!on_line(line_of(u), v.x, v.y)) return std::nullopt;
    return BlockAddr{u.s, v.x, v.y};
}

} // namespace

MemberGroups group_members(const Params& p, std::span<const ElementAddr> members) {
    for (const auto& e : members) check_valid(p, e);
    std::set<ElementAddr> distinct(members.begin(), members.end());
    if (distinct.size() > kMaxMembers)
        throw CapacityError("subset has " + std::to_string(distinct.size()) +
                            " distinct elements, at most " + std::to_string(kMaxMembers) +
                            " supported");
    MemberGroups groups;
    for (const auto& e : distinct) groups[e.block].push_back(e.i);
    return groups;
}

bool Assignment::in_b(const BlockAddr& blk) const { return contains_sorted(placed_b, blk); }
bool Assignment::in_c(const BlockAddr& blk) const { return contains_sorted(placed_c, blk); }

BlockedStatus blocked_status(const Params& p, const BlockAddr& blk, const Assignment& asg) {
    check_valid(p, blk);
    if (asg.is_non_empty(blk))
        throw std::invalid_argument("blocked_status: block " + to_string(blk) + " is non-empty");
    BlockedStatus st;
    const LineRef line = line_of(blk);
    for (const auto& u : asg.placed_b)
        if (line_of(u) == line) st.b_blocked = true;
    for (const auto& v : asg.placed_c)
        if (same_coords(v, blk)) st.c_blocked = true;
    return st;
}

bool is_valid_assignment(const Params& p, const Assignment& asg, std::string* why) {
    auto fail = [&](std::string msg) {
        if (why) *why = std::move(msg);
        return false;
    };
    for (const auto& blk : asg.placed_b)
        if (!is_valid(p, blk)) return fail("invalid block " + to_string(blk));
    for (const auto& blk : asg.placed_c)
        if (!is_valid(p, blk)) return fail("invalid block " + to_string(blk));
    for (const auto& blk : asg.placed_b)
        if (asg.in_c(blk)) return fail("block " + to_string(blk) + " placed in both B and C");

    for (std::size_t j = 0; j < asg.placed_b.size(); ++j)
        for (std::size_t k = j + 1; k < asg.placed_b.size(); ++k)
            if (line_of(asg.placed_b[j]) == line_of(asg.placed_b[k]))
                return fail("B blocks " + to_string(asg.placed_b[j]) + " and " +
                            to_string(asg.placed_b[k]) + " share line " +
                            to_string(line_of(asg.placed_b[j])));

    for (std::size_t j = 0; j < asg.placed_c.size(); ++j)
        for (std::size_t k = j + 1; k < asg.placed_c.size(); ++k)
            if (same_coords(asg.placed_c[j], asg.placed_c[k]))
                return fail("C blocks " + to_string(asg.placed_c[j]) + " and " +
                            to_string(asg.placed_c[k]) + " share coordinates");

    for (const auto& u : asg.placed_b)
        for (const auto& v : asg.placed_c)
            if (auto w = both_blocked_candidate(u, v); w && !asg.is_non_empty(*w))
                return fail("empty block " + to_string(*w) + " is blocked in both B (by " +
                            to_string(u) + ") and C (by " + to_string(v) + ")");
    return true;
}

Assignment assign_blocks(const Params& p, std::span<const BlockAddr> non_empty) {
    if (non_empty.size() > kMaxMembers)
        throw CapacityError(std::to_string(non_empty.size()) + " non-empty blocks, at most " +
                            std::to_string(kMaxMembers) + " supported");
    std::vector<BlockAddr> blocks(non_empty.begin(), non_empty.end());
    for (const auto& blk : blocks) check_valid(p, blk);
    std::sort(blocks.begin(), blocks.end());
    if (std::adjacent_find(blocks.begin(), blocks.end()) != blocks.end())
        throw std::invalid_argument("assign_blocks: duplicate non-empty block");

    const unsigned n = static_cast<unsigned>(blocks.size());
    Assignment asg;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        asg.placed_b.clear();
        asg.placed_c.clear();
        for (unsigned j = 0; j < n; ++j)
            ((mask >> j) & 1u ? asg.placed_c : asg.placed_b).push_back(blocks[j]);
        if (is_valid_assignment(p, asg)) return asg;
    }

    std::string list;
    for (const auto& blk : blocks) list += to_string(blk) + ' ';
    throw NoValidAssignment("no valid B/C placement for non-empty blocks " + list + "at b = " +
                            std::to_string(p.b()));
}

Structure build(const Params& p, std::span<const ElementAddr> members) {
    return build(p, group_members(p, members));
}

Structure build(const Params& p, const MemberGroups& groups) {
    std::vector<BlockAddr> non_empty;
    non_empty.reserve(groups.size());
    for (const auto& [blk, _] : groups) non_empty.push_back(blk);
    const Assignment asg = assign_blocks(p, non_empty);

    Structure st(p);
    BitTable& a = st.table(Table::A);
    BitTable& b = st.table(Table::B);
    BitTable& c = st.table(Table::C);

    for (const auto& blk : asg.placed_b) {
        const LineRef line = line_of(blk);
        for (u64 i : groups.at(blk)) b.set(st.b_pos(line, i));
        // Every empty block sharing this line is B-blocked and goes to C.
        for (const auto& pt : points_on_line(p, line)) {
            const BlockAddr other{blk.s, pt.x, pt.y};
            if (!asg.is_non_empty(other)) a.set(st.a_pos(other));
        }
    }
    for (const auto& blk : asg.placed_c) {
        a.set(st.a_pos(blk));
        for (u64 i : groups.at(blk)) c.set(st.c_pos(blk.x, blk.y, i));
    }
    return st;
}

QueryResult query_unchecked(const Structure& st, const ElementAddr& e) noexcept {
    QueryResult r;
    const u64 a_pos = st.a_pos(e.block);
    const bool a_bit = st.a().get(a_pos);
    r.trace[0] = {Table::A, a_pos, a_bit};
    if (!a_bit) {
        const u64 pos = st.b_pos(line_of(e.block), e.i);
        r.trace[1] = {Table::B, pos, st.b().get(pos)};
    } else {
        const u64 pos = st.c_pos(e.block.x, e.block.y, e.i);
        r.trace[1] = {Table::C, pos, st.c().get(pos)};
    }
    r.member = r.trace[1].value;
    return r;
}

QueryResult query(const Structure& st, const ElementAddr& e) {
    check_valid(st.params(), e);
    return query_unchecked(st, e);
}

std::string_view to_string(CaseLabel c) noexcept {
    switch (c) {
    case CaseLabel::I: return "I";
    case CaseLabel::II: return "II";
    case CaseLabel::IIIA: return "IIIA";
    case CaseLabel::IIIB: return "IIIB";
    case CaseLabel::IVA: return "IVA";
    case CaseLabel::IVB: return "IVB";
    case CaseLabel::IVC_i: return "IVC_i";
    case CaseLabel::IVC_ii: return "IVC_ii";
    case CaseLabel::IVD: return "IVD";
    case CaseLabel::FewerThan4Blocks: return "FEWER_THAN_4_BLOCKS";
    }
    return "?";
}

CaseLabel classify(const Params& p, std::span<const BlockAddr> non_empty) {
    std::vector<BlockAddr> blocks(non_empty.begin(), non_empty.end());
    for (const auto& blk : blocks) check_valid(p, blk);
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
    if (blocks.size() < 4) return CaseLabel::FewerThan4Blocks;
    if (blocks.size() > 4)
        throw CapacityError("classify: more than four non-empty blocks");

    std::map<LineRef, std::vector<BlockAddr>> by_line;
    for (const auto& blk : blocks) by_line[line_of(blk)].push_back(blk);

    switch (by_line.size()) {
    case 4: return CaseLabel::I;
    case 1: return CaseLabel::II;
    case 2: {
        const auto first = by_line.begin()->second.size();
        return (first == 2) ? CaseLabel::IIIB : CaseLabel::IIIA;
    }
    default: break;
    }

    // Three lines: one holds two blocks (distinct coordinates), two hold one.
    LineRef shared{};
    std::vector<BlockAddr> singles;
    for (const auto& [line, members] : by_line) {
        if (members.size() == 2)
            shared = line;
        else
            singles.push_back(members.front());
    }

    std::map<std::pair<u64, u64>, std::vector<BlockAddr>> by_coord;
    for (const auto& blk : blocks) by_coord[{blk.x, blk.y}].push_back(blk);

    std::size_t pairs = 0;
    std::vector<BlockAddr> pair;
    for (const auto& [_, group] : by_coord) {
        if (group.size() == 3) return CaseLabel::IVA;
        if (group.size() == 2) {
            ++pairs;
            pair = group;
        }
    }
    if (pairs == 2) return CaseLabel::IVB;
    if (pairs == 0) return CaseLabel::IVD;

    // One coincident pair. When it joins a single-line block with a block of
    // the shared line, the remaining single-line block decides the subcase by
    // whether its point lies on the shared line. A pair made of the two
    // single-line blocks has no such block and is filed under IVC_ii.
    bool pair_touches_shared = false;
    for (const auto& q : pair) pair_touches_shared |= line_of(q) == shared;
    if (pair_touches_shared) {
        for (const auto& blk : singles)
            if (std::find(pair.begin(), pair.end(), blk) == pair.end())
                return on_line(shared, blk.x, blk.y) ? CaseLabel::IVC_i : CaseLabel::IVC_ii;
    }
    return CaseLabel::IVC_ii;
}

} // namespace bitprobe
