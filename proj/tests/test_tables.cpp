#include "bitprobe/scheme.hpp"
#include "bitprobe/tables.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace bitprobe;

namespace {

// |B| as a plain sum of per-line blocks.
u64 b_bits_by_sum(const Params& p) {
    u64 total = 0;
    for (u64 s = 1; s <= p.b(); ++s) total += num_lines(p, s) * p.b();
    return total;
}

std::vector<std::uint8_t> empty_b2_stream() { return serialize(Structure(Params(2))); }

} // namespace

TEST_CASE("bit table basics") {
    BitTable t(13);
    CHECK(t.size() == 13);
    CHECK(t.bytes().size() == 2);
    CHECK(t.count() == 0);
    t.set(0);
    t.set(9);
    CHECK(t.get(0));
    CHECK(t.get(9));
    CHECK_FALSE(t.get(8));
    CHECK(t.bytes()[0] == 0x01);
    CHECK(t.bytes()[1] == 0x02);
    t.flip(9);
    CHECK_FALSE(t.get(9));
    CHECK(t.set_positions() == std::vector<u64>{0});
    CHECK_THROWS_AS((void)t.get(13), std::out_of_range);
    CHECK_THROWS_AS(t.set(13), std::out_of_range);
}

TEST_CASE("table sizes") {
    const Params p(2);
    CHECK(table_a_bits(p) == 32);
    CHECK(table_b_bits(p) == 34);
    CHECK(table_c_bits(p) == 32);
    CHECK(total_bits(p) == 98);
    CHECK(table_b_bits(Params(4)) == 856);
    for (u64 b = 2; b <= 16; ++b) CHECK(table_b_bits(Params(b)) == b_bits_by_sum(Params(b)));
}

TEST_CASE("a_index examples") {
    CHECK(a_index(Params(2), {1, 0, 0}) == 0);
    CHECK(a_index(Params(2), {2, 3, 3}) == 31);
    CHECK(a_index(Params(3), {2, 0, 4}) == 117);
    CHECK_THROWS_AS((void)a_index(Params(2), {3, 0, 0}), RangeError);
}

TEST_CASE("c_index examples") {
    CHECK(c_index(Params(2), 0, 0, 0) == 0);
    CHECK(c_index(Params(2), 3, 3, 1) == 31);
    CHECK(c_index(Params(2), 1, 2, 0) == 18);
    CHECK_THROWS_AS((void)c_index(Params(2), 4, 0, 0), RangeError);
}

TEST_CASE("b_index examples") {
    const Params p(2);
    CHECK(b_offset(p, 2) == 14);
    CHECK(b_index(p, {1, -3}, 0) == 0);
    CHECK(b_index(p, {2, 3}, 1) == 33);
    CHECK(b_index(p, {2, -6}, 0) == 14);
    CHECK_THROWS_AS((void)b_index(p, {2, 4}, 0), RangeError);
    CHECK_THROWS_AS((void)b_index(p, {1, 0}, 2), RangeError);
}

TEST_CASE("index layouts are bijections") {
    for (u64 b = 2; b <= 6; ++b) {
        const Params p(b);
        const Structure st(p);

        std::vector<int> seen(table_a_bits(p), 0);
        for (u64 n = 0; n < p.num_blocks(); ++n) {
            const u64 k = a_index(p, block_from_ordinal(p, n));
            REQUIRE(k < seen.size());
            ++seen[k];
        }
        CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(seen.size()));

        seen.assign(table_c_bits(p), 0);
        for (u64 y = 0; y < p.grid_side(); ++y)
            for (u64 x = 0; x < p.grid_side(); ++x)
                for (u64 i = 0; i < b; ++i) {
                    const u64 k = c_index(p, x, y, i);
                    REQUIRE(k < seen.size());
                    CHECK(st.c_pos(x, y, i) == k);
                    ++seen[k];
                }
        CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(seen.size()));

        seen.assign(table_b_bits(p), 0);
        for (u64 s = 1; s <= b; ++s)
            for (i64 a = min_anchor(p, s); a <= max_anchor(p, s); ++a)
                for (u64 i = 0; i < b; ++i) {
                    const u64 k = b_index(p, {s, a}, i);
                    REQUIRE(k < seen.size());
                    CHECK(st.b_pos({s, a}, i) == k);
                    ++seen[k];
                }
        CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(seen.size()));
    }
}

TEST_CASE("serialization of the empty b=2 structure is bit exact") {
    const auto bytes = empty_b2_stream();
    // 4 magic + 1 version + 8 b + 3 * 8 lengths + 4 + 5 + 4 payload bytes.
    REQUIRE(bytes.size() == 50);
    const std::vector<std::uint8_t> header{'B', 'P', '4', '2', 1, 2, 0, 0, 0, 0, 0, 0, 0};
    CHECK(std::equal(header.begin(), header.end(), bytes.begin()));
    CHECK(bytes[13] == 32); // |A|
    CHECK(bytes[25] == 34); // |B|
    CHECK(bytes[38] == 32); // |C|
    std::size_t ones = 0;
    for (std::size_t k = 21; k < 25; ++k) ones += bytes[k];
    for (std::size_t k = 33; k < 38; ++k) ones += bytes[k];
    for (std::size_t k = 46; k < 50; ++k) ones += bytes[k];
    CHECK(ones == 0);
}

TEST_CASE("serialization round trip on random structures") {
    std::mt19937_64 gen(42);
    for (u64 b : {2u, 3u, 4u}) {
        const Params p(b);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<ElementAddr> s;
            const auto n = gen() % 5;
            for (u64 k = 0; k < n; ++k)
                s.push_back(element_from_ordinal(p, gen() % p.universe_size()));
            const Structure st = build(p, s);
            const auto bytes = serialize(st);
            const Structure back = deserialize(bytes);
            CHECK(back == st);
            CHECK(serialize(back) == bytes);
        }
    }
}

TEST_CASE("malformed streams are rejected by kind") {
    auto kind_of = [](const std::vector<std::uint8_t>& bytes) {
        try {
            (void)deserialize(bytes);
        } catch (const FormatError& e) {
            return e.kind();
        }
        FAIL("stream was accepted");
        return FormatError::Kind::BadMagic;
    };
    const auto good = empty_b2_stream();

    auto bad_magic = good;
    bad_magic[0] = 'X';
    CHECK(kind_of(bad_magic) == FormatError::Kind::BadMagic);
    CHECK(kind_of({}) == FormatError::Kind::BadMagic);

    auto bad_version = good;
    bad_version[4] = 2;
    CHECK(kind_of(bad_version) == FormatError::Kind::VersionMismatch);

    auto bad_b = good;
    bad_b[5] = 1;
    CHECK(kind_of(bad_b) == FormatError::Kind::BadParams);

    auto truncated = good;
    truncated.pop_back();
    CHECK(kind_of(truncated) == FormatError::Kind::LengthMismatch);
    CHECK(kind_of({good.begin(), good.begin() + 10}) == FormatError::Kind::LengthMismatch);

    auto wrong_len = good;
    wrong_len[13] = 31;
    CHECK(kind_of(wrong_len) == FormatError::Kind::LengthMismatch);

    auto padded = good;
    padded[37] = 0x80; // bit 39 of B, beyond its 34 bits
    CHECK(kind_of(padded) == FormatError::Kind::BadPadding);

    auto trailing = good;
    trailing.push_back(0);
    CHECK(kind_of(trailing) == FormatError::Kind::TrailingBytes);
}
