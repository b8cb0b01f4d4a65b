#pragma once
// oracle.hpp - brute-force verification of the scheme against plain set
// membership, plus the space audit and a single-bit fault sweep.
//
// Ground truth is always a direct lookup in the subset itself; nothing here
// reuses the storage or query code paths to decide the expected answer.

#include "bitprobe/geometry.hpp"
#include "bitprobe/scheme.hpp"

#include <chrono>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace bitprobe {

/// Seeded generator for reproducible subset draws: std::mt19937_64 (whose
/// output sequence is fixed by the standard) with bounded draws by rejection
/// sampling, so reports match across platforms and standard libraries.
class SubsetRng {
public:
    explicit SubsetRng(u64 seed) : engine_(seed) {}

    /// Uniform integer in [0, bound).
    u64 below(u64 bound);

    /// `n` distinct ordinals from [0, universe), sorted ascending.
    std::vector<u64> subset(u64 universe, u64 n);

private:
    std::mt19937_64 engine_;
};

struct Failure {
    std::vector<u64> subset; // element ordinals
    u64 element = 0;
    bool expected = false;
    bool got = false;
    ProbeTrace trace{};
    std::string note; // set when the build itself failed

    friend bool operator==(const Failure&, const Failure&) = default;
};

struct VerifyReport {
    u64 b = 0;
    u64 subsets_checked = 0;
    u64 queries_checked = 0;
    u64 failure_count = 0;        // exact, never capped
    u64 trace_violations = 0;     // traces not shaped (A, B|C)
    u64 build_errors = 0;         // NoValidAssignment and friends
    std::vector<Failure> failures; // first `failure_cap` failures
    std::map<CaseLabel, u64> case_histogram;
    std::chrono::duration<double> elapsed{};

    [[nodiscard]] bool passed() const noexcept {
        return failure_count == 0 && trace_violations == 0 && build_errors == 0;
    }

    /// Equality of everything except the wall-clock time.
    [[nodiscard]] bool same_outcome(const VerifyReport& o) const;
};

struct VerifyOptions {
    u64 max_n = 4;
    unsigned threads = 0; // 0: hardware concurrency
    std::size_t failure_cap = 32;
    double query_budget = 1e9; // exhaustive runs above this are refused
};

/// Exhaustive run refused because it would exceed the query budget.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, double estimated_queries)
        : std::runtime_error(what), estimated_queries_(estimated_queries) {}
    [[nodiscard]] double estimated_queries() const noexcept { return estimated_queries_; }

private:
    double estimated_queries_;
};

/// Sum over k <= max_n of C(m, k), and that times m.
[[nodiscard]] double exhaustive_subset_count(u64 b, u64 max_n);
[[nodiscard]] double exhaustive_query_count(u64 b, u64 max_n);

/// Checks every subset of size <= max_n, in lexicographic ordinal order,
/// against every element of the universe.
[[nodiscard]] VerifyReport verify_exhaustive(u64 b, const VerifyOptions& opt = {});

/// Checks `trials` seeded uniform n-subsets. For b <= 4 every element is
/// queried; above that the members plus 10'000 seeded non-members.
[[nodiscard]] VerifyReport verify_random(u64 b, u64 trials, u64 seed, u64 n = 4,
                                         const VerifyOptions& opt = {});

inline constexpr u64 kSampledNonMembers = 10'000;

/// Checks one subset; exposed for fault injection and tests.
/// `probe` lists the element ordinals to query (empty: whole universe).
[[nodiscard]] VerifyReport check_structure(const Structure& st, const std::vector<u64>& subset,
                                           const std::vector<u64>& probe = {},
                                           std::size_t failure_cap = 32);

struct SpaceRow {
    u64 b = 0;
    u64 a_bits = 0;
    u64 b_bits = 0;
    u64 c_bits = 0;
    u64 total = 0;
    double ratio = 0; // total / b^5
};

[[nodiscard]] std::vector<SpaceRow> space_audit(u64 lo, u64 hi);

/// Outcome of flipping every bit of a batch of built structures.
struct FaultReport {
    u64 structures = 0;
    u64 flips = 0;
    u64 detected = 0;        // some query disagreed with ground truth
    u64 provably_benign = 0; // routing analysis shows no answer can change
    u64 unexplained = 0;     // undetected but not proven benign
    u64 mispredicted = 0;    // proven benign yet detected

    [[nodiscard]] double detection_rate() const noexcept {
        const u64 observable = flips - provably_benign;
        return observable == 0 ? 1.0 : static_cast<double>(detected) / static_cast<double>(observable);
    }
};

/// Whether flipping bit `pos` of table `t` leaves every answer unchanged,
/// decided from the routing of each block alone.
[[nodiscard]] bool flip_is_benign(const Structure& st, Table t, u64 pos);

[[nodiscard]] FaultReport fault_sweep(u64 b, u64 structures, u64 seed);

[[nodiscard]] std::string format_text(const VerifyReport& r);
[[nodiscard]] std::string format_csv(const VerifyReport& r);
[[nodiscard]] std::string format_space_text(const std::vector<SpaceRow>& rows);
[[nodiscard]] std::string format_space_csv(const std::vector<SpaceRow>& rows);

} // namespace bitprobe
