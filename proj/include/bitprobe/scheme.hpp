#pragma once
// scheme.hpp - storage and query schemes for subsets of at most four elements.
//
// Query: probe A at the element's block. A 0 sends the second probe to the
// block's line slot in B, a 1 sends it to the block's coordinate slot in C.
// The second bit is the answer.
//
// Storage: every non-empty block is stored whole, either in B (A-bit 0) or
// in C (A-bit 1). A placement is valid when
//   - no two B-placed blocks share a line,
//   - no two C-placed blocks share grid coordinates, and
//   - no empty block is both B-blocked (on the line of a B-placed block)
//     and C-blocked (at the coordinates of a C-placed block).
// Empty blocks go to B unless B-blocked, in which case they go to C.

#include "bitprobe/geometry.hpp"
#include "bitprobe/tables.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace bitprobe {

inline constexpr std::size_t kMaxMembers = 4;

/// More than kMaxMembers distinct elements were supplied.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// No placement satisfied the separation constraints. Unreachable if the
/// four-element construction is correct; reported loudly if it ever fires.
class NoValidAssignment : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct ProbeRecord {
    Table table = Table::A;
    u64 pos = 0;
    bool value = false;

    friend bool operator==(const ProbeRecord&, const ProbeRecord&) = default;
};

/// Both reads made by one query, the first always in table A.
using ProbeTrace = std::array<ProbeRecord, 2>;

struct QueryResult {
    bool member = false;
    ProbeTrace trace{};
};

/// Non-empty blocks mapped to the sorted member indices they hold.
using MemberGroups = std::map<BlockAddr, std::vector<u64>>;

[[nodiscard]] MemberGroups group_members(const Params& p, std::span<const ElementAddr> members);

struct Assignment {
    std::vector<BlockAddr> placed_b; // sorted
    std::vector<BlockAddr> placed_c; // sorted

    [[nodiscard]] bool in_b(const BlockAddr& blk) const;
    [[nodiscard]] bool in_c(const BlockAddr& blk) const;
    [[nodiscard]] bool is_non_empty(const BlockAddr& blk) const { return in_b(blk) || in_c(blk); }

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct BlockedStatus {
    bool b_blocked = false;
    bool c_blocked = false;

    friend bool operator==(const BlockedStatus&, const BlockedStatus&) = default;
};

/// Blocked status of an empty block; throws std::invalid_argument if blk is
/// one of the assignment's non-empty blocks.
[[nodiscard]] BlockedStatus blocked_status(const Params& p, const BlockAddr& blk,
                                           const Assignment& asg);

/// Checks all four placement invariants. On failure, `why` (if given)
/// receives a short description of the first violation.
[[nodiscard]] bool is_valid_assignment(const Params& p, const Assignment& asg,
                                       std::string* why = nullptr);

/// First valid placement in canonical order: blocks sorted by (s, x, y),
/// candidate masks tried in ascending order, bit j set = block j to table C.
[[nodiscard]] Assignment assign_blocks(const Params& p, std::span<const BlockAddr> non_empty);

[[nodiscard]] Structure build(const Params& p, std::span<const ElementAddr> members);
[[nodiscard]] Structure build(const Params& p, const MemberGroups& groups);

/// Two-probe membership query. Throws RangeError before probing if the
/// address lies outside the structure's universe.
[[nodiscard]] QueryResult query(const Structure& st, const ElementAddr& e);

/// Query without address validation, for callers that iterate the universe.
[[nodiscard]] QueryResult query_unchecked(const Structure& st, const ElementAddr& e) noexcept;

enum class CaseLabel : std::uint8_t {
    I,
    II,
    IIIA,
    IIIB,
    IVA,
    IVB,
    IVC_i,
    IVC_ii,
    IVD,
    FewerThan4Blocks,
};

inline constexpr std::array kAllCaseLabels{
    CaseLabel::I,   CaseLabel::II,  CaseLabel::IIIA,  CaseLabel::IIIB,   CaseLabel::IVA,
    CaseLabel::IVB, CaseLabel::IVC_i, CaseLabel::IVC_ii, CaseLabel::IVD, CaseLabel::FewerThan4Blocks,
};

[[nodiscard]] std::string_view to_string(CaseLabel c) noexcept;

/// Configuration class of the non-empty blocks: how many distinct lines they
/// span and which of them share grid coordinates. Diagnostic only.
[[nodiscard]] CaseLabel classify(const Params& p, std::span<const BlockAddr> non_empty);

} // namespace bitprobe
