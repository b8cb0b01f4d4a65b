#include "bitprobe/tables.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <optional>

namespace bitprobe {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'B', 'P', '4', '2'};

void put_u64(std::vector<std::uint8_t>& out, u64 v) {
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::span<const std::uint8_t> take(std::size_t n, const char* what) {
        if (in_.size() - pos_ < n)
            throw FormatError(FormatError::Kind::LengthMismatch,
                              std::string("stream truncated while reading ") + what + ": need " +
                                  std::to_string(n) + " bytes, have " +
                                  std::to_string(in_.size() - pos_));
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    u64 u64_le(const char* what) {
        auto s = take(8, what);
        u64 v = 0;
        for (int k = 7; k >= 0; --k) v = (v << 8) | s[static_cast<std::size_t>(k)];
        return v;
    }

    [[nodiscard]] std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

BitTable read_table(Reader& r, char name, u64 expected_len) {
    const std::string label = std::string("table ") + name;
    const u64 len = r.u64_le((label + " length").c_str());
    if (len != expected_len)
        throw FormatError(FormatError::Kind::LengthMismatch,
                          label + " declares " + std::to_string(len) + " bits, expected " +
                              std::to_string(expected_len));
    auto payload = r.take(BitTable::byte_count(len), (label + " payload").c_str());
    try {
        return BitTable::from_bytes(len, payload);
    } catch (const std::invalid_argument& e) {
        throw FormatError(FormatError::Kind::BadPadding, label + ": " + e.what());
    }
}

} // namespace

u64 table_a_bits(const Params& p) noexcept { return p.num_blocks(); }

u64 table_c_bits(const Params& p) noexcept { return p.blocks_per_superblock() * p.b(); }

u64 table_b_bits(const Params& p) noexcept {
    // b * [ (b^2 - 1) * b(b+3)/2 + b ]
    const u64 b = p.b();
    return b * ((b * b - 1) * (b * (b + 3) / 2) + b);
}

u64 b_offset(const Params& p, u64 s) {
    if (s < 1 || s > p.b() + 1)
        throw RangeError("superblock id " + std::to_string(s) + " outside [1, " +
                         std::to_string(p.b() + 1) + "]");
    // sum_{j<s} ((j+1)(b^2-1) + 1) * b
    const u64 n = s - 1;
    const u64 sum_j_plus_1 = n * (n + 3) / 2;
    return (sum_j_plus_1 * (p.grid_side() - 1) + n) * p.b();
}

u64 a_index(const Params& p, const BlockAddr& blk) {
    check_valid(p, blk);
    return block_ordinal(p, blk);
}

u64 c_index(const Params& p, u64 x, u64 y, u64 i) {
    if (x >= p.grid_side() || y >= p.grid_side() || i >= p.b())
        throw RangeError("C coordinate (" + std::to_string(x) + "," + std::to_string(y) + "," +
                         std::to_string(i) + ") out of range");
    return (y * p.grid_side() + x) * p.b() + i;
}

u64 b_index(const Params& p, const LineRef& l, u64 i) {
    if (i >= p.b())
        throw RangeError("index " + std::to_string(i) + " outside [0, " + std::to_string(p.b()) +
                         ")");
    return b_offset(p, l.s) + line_ordinal(p, l) * p.b() + i;
}

Structure::Structure(const Params& p)
    : Structure(p, BitTable(table_a_bits(p)), BitTable(table_b_bits(p)),
                BitTable(table_c_bits(p))) {}

Structure::Structure(const Params& p, BitTable a, BitTable b, BitTable c)
    : params_(p), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (a_.size() != table_a_bits(p) || b_.size() != table_b_bits(p) ||
        c_.size() != table_c_bits(p))
        throw std::invalid_argument("table sizes do not match b = " + std::to_string(p.b()));
    line_offsets_.reserve(p.b());
    for (u64 s = 1; s <= p.b(); ++s) line_offsets_.push_back(b_offset(p, s));
}

const BitTable& Structure::table(Table t) const noexcept {
    switch (t) {
    case Table::A: return a_;
    case Table::B: return b_;
    case Table::C: break;
    }
    return c_;
}

BitTable& Structure::table(Table t) noexcept {
    return const_cast<BitTable&>(static_cast<const Structure&>(*this).table(t));
}

u64 Structure::a_pos(const BlockAddr& blk) const noexcept { return block_ordinal(params_, blk); }

u64 Structure::b_pos(const LineRef& l, u64 i) const noexcept {
    const i64 ordinal = l.anchor + static_cast<i64>(l.s) * static_cast<i64>(params_.grid_side() - 1);
    return line_offsets_[l.s - 1] + static_cast<u64>(ordinal) * params_.b() + i;
}

u64 Structure::c_pos(u64 x, u64 y, u64 i) const noexcept {
    return (y * params_.grid_side() + x) * params_.b() + i;
}

std::vector<std::uint8_t> serialize(const Structure& st) {
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.push_back(kFormatVersion);
    put_u64(out, st.params().b());
    for (Table t : {Table::A, Table::B, Table::C}) {
        const BitTable& tab = st.table(t);
        put_u64(out, tab.size());
        out.insert(out.end(), tab.bytes().begin(), tab.bytes().end());
    }
    return out;
}

Structure deserialize(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    if (bytes.size() < kMagic.size() ||
        !std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
        throw FormatError(FormatError::Kind::BadMagic, "missing BP42 magic");
    (void)r.take(kMagic.size(), "magic");
    const auto version = r.take(1, "version")[0];
    if (version != kFormatVersion)
        throw FormatError(FormatError::Kind::VersionMismatch,
                          "format version " + std::to_string(version) + ", expected " +
                              std::to_string(kFormatVersion));
    const u64 b = r.u64_le("b");
    std::optional<Params> p;
    try {
        p.emplace(b);
    } catch (const RangeError& e) {
        throw FormatError(FormatError::Kind::BadParams, e.what());
    }
    BitTable a = read_table(r, 'A', table_a_bits(*p));
    BitTable tb = read_table(r, 'B', table_b_bits(*p));
    BitTable c = read_table(r, 'C', table_c_bits(*p));
    if (r.remaining() != 0)
        throw FormatError(FormatError::Kind::TrailingBytes,
                          std::to_string(r.remaining()) + " trailing bytes after table C");
    return Structure(*p, std::move(a), std::move(tb), std::move(c));
}

void write_file(const std::string& path, const Structure& st) {
    const auto bytes = serialize(st);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

Structure read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

} // namespace bitprobe
