// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include "bitprobe/geometry.hpp"
#include "bitprobe/oracle.hpp"
#include "bitprobe/scheme.hpp"
#include "bitprobe/tables.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace bitprobe;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string summary(const VerifyReport& r) {
    std::ostringstream os;
    os << "b=" << r.b << " subsets=" << r.subsets_checked << " queries=" << r.queries_checked
       << " failures=" << r.failure_count << " build_errors=" << r.build_errors << " ("
       << r.elapsed.count() << " s)";
    return os.str();
}

u64 pow_u(u64 b, int e) {
    u64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Criteria 1 and 3 share one exhaustive run.
void exhaustive_and_probes() {
    const VerifyReport r = verify_exhaustive(2);
    const bool counts = r.subsets_checked == 679121 && r.queries_checked == 679121ull * 64;
    report(1, "exhaustive correctness b=2", counts && r.failure_count == 0 && r.build_errors == 0,
           summary(r));
    std::ostringstream hist;
    for (CaseLabel c : kAllCaseLabels) {
        auto it = r.case_histogram.find(c);
        hist << ' ' << to_string(c) << '=' << (it == r.case_histogram.end() ? 0 : it->second);
    }
    std::printf("      case histogram:%s\n", hist.str().c_str());
    report(3, "probe discipline", counts && r.trace_violations == 0,
           "traces checked=" + std::to_string(r.queries_checked) +
               " violations=" + std::to_string(r.trace_violations));
}

void randomized() {
    const VerifyReport r3 = verify_random(3, 100000, 1);
    const VerifyReport r4 = verify_random(4, 10000, 1);
    const bool ok = r3.passed() && r4.passed() && r3.queries_checked == 100000ull * 729 &&
                    r4.queries_checked == 10000ull * 4096;
    report(2, "randomized correctness", ok, summary(r3) + "; " + summary(r4));
}

void space_formulas() {
    bool ok = true;
    std::ostringstream detail;
    for (const auto& row : space_audit(2, 16)) {
        const u64 b = row.b;
        const Params p(b);
        u64 lines = 0;
        for (u64 s = 1; s <= b; ++s) {
            // Count anchors one by one rather than using the closed form.
            for (i64 a = -static_cast<i64>(s * (b * b - 1)); a < static_cast<i64>(b * b); ++a) ++lines;
        }
        const u64 b_closed = b * ((b * b - 1) * b * (b + 3) / 2 + b);
        ok &= row.a_bits == pow_u(b, 5) && row.c_bits == pow_u(b, 5);
        ok &= row.b_bits == b_closed && row.b_bits == lines * b;
        ok &= row.total == row.a_bits + row.b_bits + row.c_bits;
        ok &= row.ratio <= 3.1;
        if (b >= 4) ok &= row.ratio <= 3.0;
        if (b == 2) ok &= row.a_bits == 32 && row.b_bits == 34 && row.c_bits == 32;
        if (b == 4) ok &= row.a_bits == 1024 && row.b_bits == 856 && row.c_bits == 1024;
        if (b == 2 || b == 4 || b == 16)
            detail << "b=" << b << ":(" << row.a_bits << ',' << row.b_bits << ',' << row.c_bits
                   << ") ratio=" << row.ratio << ' ';
    }
    report(4, "space formulas b=2..16", ok, detail.str());
}

void line_geometry() {
    u64 violations = 0, lines_checked = 0;
    for (u64 b = 2; b <= 8; ++b) {
        const Params p(b);
        const i64 side = static_cast<i64>(p.grid_side());
        for (u64 s = 1; s <= b; ++s) {
            const i64 lo = -static_cast<i64>(s) * (side - 1);
            const i64 hi = side; // exclusive
            // Points per anchor, by scanning the grid.
            std::map<i64, u64> per_anchor;
            for (i64 y = 0; y < side; ++y)
                for (i64 x = 0; x < side; ++x) {
                    u64 on = 0;
                    for (i64 a = lo; a < hi; ++a)
                        if (x - static_cast<i64>(s) * y == a) ++on;
                    if (on != 1) ++violations; // every point on exactly one line
                    ++per_anchor[x - static_cast<i64>(s) * y];
                }
            // Every line of the family is non-empty, and no point falls outside it.
            for (i64 a = lo; a < hi; ++a) {
                ++lines_checked;
                if (per_anchor[a] == 0) ++violations;
                if (points_on_line(p, {s, a}).size() != per_anchor[a]) ++violations;
            }
            if (per_anchor.size() != static_cast<std::size_t>(hi - lo)) ++violations;
            if (static_cast<u64>(hi - lo) != (s + 1) * (p.grid_side() - 1) + 1) ++violations;
            if (num_lines(p, s) != static_cast<u64>(hi - lo)) ++violations;
        }
        // Lines of different superblocks meet in at most one grid point.
        for (u64 s = 1; s <= b; ++s)
            for (u64 t = s + 1; t <= b; ++t) {
                std::map<std::pair<i64, i64>, u64> shared;
                for (i64 y = 0; y < side; ++y)
                    for (i64 x = 0; x < side; ++x)
                        ++shared[{x - static_cast<i64>(s) * y, x - static_cast<i64>(t) * y}];
                for (const auto& [_, n] : shared)
                    if (n > 1) ++violations;
            }
    }
    report(5, "line geometry b=2..8", violations == 0,
           "lines checked=" + std::to_string(lines_checked) +
               " violations=" + std::to_string(violations));
}

void determinism() {
    const Params p(3);
    SubsetRng rng(1);
    std::mt19937_64 shuffle(2);
    u64 mismatches = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto subset = rng.subset(p.universe_size(), 1 + static_cast<u64>(k) % 4);
        std::vector<ElementAddr> members;
        for (u64 n : subset) members.push_back(element_from_ordinal(p, n));
        const auto first = serialize(build(p, members));
        std::shuffle(members.begin(), members.end(), shuffle);
        members.push_back(members.front());
        const Structure again = build(p, members);
        const auto second = serialize(again);
        if (first != second) ++mismatches;
        const Structure back = deserialize(second);
        if (!(back == again) || serialize(back) != second) ++mismatches;
    }
    report(6, "determinism + serialization", mismatches == 0,
           "structures=1000 b=3 mismatches=" + std::to_string(mismatches));
}

void fault_sensitivity() {
    const FaultReport fr = fault_sweep(2, 100, 1);
    const double rate = fr.detection_rate();
    const bool ok = fr.flips == 100 * 98 && rate >= 0.99 && fr.unexplained == 0 &&
                    fr.mispredicted == 0;
    std::ostringstream os;
    os << "flips=" << fr.flips << " detected=" << fr.detected
       << " provably_benign=" << fr.provably_benign << " unexplained=" << fr.unexplained
       << " mispredicted=" << fr.mispredicted << " rate(non-benign)=" << rate
       << " raw_rate=" << static_cast<double>(fr.detected) / static_cast<double>(fr.flips);
    report(7, "fault sensitivity b=2", ok, os.str());
}

} // namespace

int main() {
    try {
        exhaustive_and_probes();
        randomized();
        space_formulas();
        line_geometry();
        determinism();
        fault_sensitivity();
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
