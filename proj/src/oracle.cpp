#include "bitprobe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

namespace bitprobe {

namespace {

using Clock = std::chrono::steady_clock;

bool trace_well_formed(const ProbeTrace& t) noexcept {
    return t[0].table == Table::A && (t[1].table == Table::B || t[1].table == Table::C) &&
           (t[1].table == Table::B) == !t[0].value;
}

void merge_into(VerifyReport& total, VerifyReport&& part, std::size_t cap) {
    total.subsets_checked += part.subsets_checked;
    total.queries_checked += part.queries_checked;
    total.failure_count += part.failure_count;
    total.trace_violations += part.trace_violations;
    total.build_errors += part.build_errors;
    for (auto& f : part.failures) {
        if (total.failures.size() >= cap) break;
        total.failures.push_back(std::move(f));
    }
    for (const auto& [label, n] : part.case_histogram) total.case_histogram[label] += n;
}

CaseLabel label_of(const Params& p, const std::vector<u64>& subset) {
    std::vector<BlockAddr> blocks;
    for (u64 n : subset) blocks.push_back(element_from_ordinal(p, n).block);
    return classify(p, blocks);
}

VerifyReport check_subset(const Params& p, const std::vector<u64>& subset,
                          const std::vector<u64>& probe, std::size_t cap) {
    VerifyReport r;
    std::vector<ElementAddr> members;
    members.reserve(subset.size());
    for (u64 n : subset) members.push_back(element_from_ordinal(p, n));
    try {
        const Structure st = build(p, members);
        r = check_structure(st, subset, probe, cap);
    } catch (const std::exception& e) {
        r.b = p.b();
        r.subsets_checked = 1;
        r.build_errors = 1;
        r.failure_count = 1;
        if (cap > 0) r.failures.push_back({subset, 0, false, false, {}, e.what()});
    }
    r.case_histogram[label_of(p, subset)] += 1;
    return r;
}

// Lexicographic successor among sorted subsets of [0, m) with at most
// max_n elements. Returns false after the last one.
bool next_subset(std::vector<u64>& cur, u64 m, u64 max_n) {
    if (cur.size() < max_n && (cur.empty() || cur.back() + 1 < m)) {
        cur.push_back(cur.empty() ? 0 : cur.back() + 1);
        return true;
    }
    while (!cur.empty() && cur.back() + 1 >= m) cur.pop_back();
    if (cur.empty()) return false;
    ++cur.back();
    return true;
}

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs `work` over each job in parallel and merges results in job order, so
// the report does not depend on the thread count.
template <class Job, class Work>
void run_batch(const std::vector<Job>& jobs, unsigned threads, Work&& work, VerifyReport& total,
               std::size_t cap) {
    std::vector<VerifyReport> out(jobs.size());
    const unsigned t_count = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
    if (t_count <= 1) {
        for (std::size_t j = 0; j < jobs.size(); ++j) out[j] = work(jobs[j]);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(t_count);
        for (unsigned t = 0; t < t_count; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t j = t; j < jobs.size(); j += t_count) out[j] = work(jobs[j]);
            });
    }
    for (auto& r : out) merge_into(total, std::move(r), cap);
}

constexpr std::size_t kBatch = 1 << 14;

} // namespace

u64 SubsetRng::below(u64 bound) {
    if (bound == 0) throw std::invalid_argument("SubsetRng::below: empty range");
    const u64 limit = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % bound;
    u64 v;
    do v = engine_();
    while (v >= limit);
    return v % bound;
}

std::vector<u64> SubsetRng::subset(u64 universe, u64 n) {
    if (n > universe) throw std::invalid_argument("subset larger than universe");
    std::vector<u64> out;
    out.reserve(n);
    while (out.size() < n) {
        const u64 v = below(universe);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool VerifyReport::same_outcome(const VerifyReport& o) const {
    return b == o.b && subsets_checked == o.subsets_checked &&
           queries_checked == o.queries_checked && failure_count == o.failure_count &&
           trace_violations == o.trace_violations && build_errors == o.build_errors &&
           failures == o.failures && case_histogram == o.case_histogram;
}

double exhaustive_subset_count(u64 b, u64 max_n) {
    const double m = static_cast<double>(Params(b).universe_size());
    double total = 0, term = 1;
    for (u64 k = 0; k <= max_n && static_cast<double>(k) <= m; ++k) {
        total += term;
        term = term * (m - static_cast<double>(k)) / static_cast<double>(k + 1);
    }
    return total;
}

double exhaustive_query_count(u64 b, u64 max_n) {
    return exhaustive_subset_count(b, max_n) * static_cast<double>(Params(b).universe_size());
}

VerifyReport check_structure(const Structure& st, const std::vector<u64>& subset,
                             const std::vector<u64>& probe, std::size_t failure_cap) {
    const Params& p = st.params();
    VerifyReport r;
    r.b = p.b();
    r.subsets_checked = 1;
    std::vector<u64> sorted = subset;
    std::sort(sorted.begin(), sorted.end());

    auto check_one = [&](u64 n) {
        const ElementAddr e = element_from_ordinal(p, n);
        const QueryResult q = query(st, e);
        const bool expected = std::binary_search(sorted.begin(), sorted.end(), n);
        ++r.queries_checked;
        if (!trace_well_formed(q.trace)) ++r.trace_violations;
        if (q.member != expected) {
            ++r.failure_count;
            if (r.failures.size() < failure_cap)
                r.failures.push_back({sorted, n, expected, q.member, q.trace, {}});
        }
    };

    if (probe.empty()) {
        for (u64 n = 0; n < p.universe_size(); ++n) check_one(n);
    } else {
        for (u64 n : probe) check_one(n);
    }
    return r;
}

VerifyReport verify_exhaustive(u64 b, const VerifyOptions& opt) {
    const Params p(b);
    const double work = exhaustive_query_count(b, opt.max_n);
    if (work > opt.query_budget) {
        std::ostringstream os;
        os << "exhaustive check at b = " << b << " with |S| <= " << opt.max_n << " needs about "
           << work << " queries over " << exhaustive_subset_count(b, opt.max_n)
           << " subsets, above the budget of " << opt.query_budget;
        throw InfeasibleError(os.str(), work);
    }

    const auto start = Clock::now();
    const unsigned threads = resolve_threads(opt.threads);
    VerifyReport total;
    total.b = b;

    const std::vector<u64> all_elements;
    auto work_fn = [&](const std::vector<u64>& s) {
        return check_subset(p, s, all_elements, opt.failure_cap);
    };

    std::vector<std::vector<u64>> batch;
    batch.reserve(kBatch);
    std::vector<u64> cur; // starts at the empty subset
    bool more = true;
    while (more) {
        batch.push_back(cur);
        more = next_subset(cur, p.universe_size(), opt.max_n);
        if (batch.size() == kBatch || !more) {
            run_batch(batch, threads, work_fn, total, opt.failure_cap);
            batch.clear();
        }
    }
    total.elapsed = Clock::now() - start;
    return total;
}

VerifyReport verify_random(u64 b, u64 trials, u64 seed, u64 n, const VerifyOptions& opt) {
    const Params p(b);
    if (trials == 0) throw std::invalid_argument("verify_random: trials must be at least 1");
    if (n > kMaxMembers)
        throw std::invalid_argument("verify_random: subset size " + std::to_string(n) +
                                    " exceeds " + std::to_string(kMaxMembers));

    const auto start = Clock::now();
    const unsigned threads = resolve_threads(opt.threads);
    const bool whole_universe = b <= 4;
    SubsetRng rng(seed);
    VerifyReport total;
    total.b = b;

    struct Job {
        std::vector<u64> subset;
        std::vector<u64> probe;
    };
    auto work_fn = [&](const Job& j) { return check_subset(p, j.subset, j.probe, opt.failure_cap); };

    std::vector<Job> batch;
    for (u64 t = 0; t < trials; ++t) {
        Job job{rng.subset(p.universe_size(), n), {}};
        if (!whole_universe) {
            job.probe = job.subset;
            for (u64 k = 0; k < kSampledNonMembers;) {
                const u64 v = rng.below(p.universe_size());
                if (std::binary_search(job.subset.begin(), job.subset.end(), v)) continue;
                job.probe.push_back(v);
                ++k;
            }
        }
        batch.push_back(std::move(job));
        if (batch.size() == kBatch || t + 1 == trials) {
            run_batch(batch, threads, work_fn, total, opt.failure_cap);
            batch.clear();
        }
    }
    total.elapsed = Clock::now() - start;
    return total;
}

std::vector<SpaceRow> space_audit(u64 lo, u64 hi) {
    if (lo > hi) throw std::invalid_argument("space_audit: empty range");
    std::vector<SpaceRow> rows;
    for (u64 b = lo; b <= hi; ++b) {
        const Params p(b);
        SpaceRow row{b, table_a_bits(p), table_b_bits(p), table_c_bits(p), total_bits(p), 0};
        row.ratio = static_cast<double>(row.total) / static_cast<double>(p.num_blocks());
        rows.push_back(row);
    }
    return rows;
}

bool flip_is_benign(const Structure& st, Table t, u64 pos) {
    const Params& p = st.params();
    switch (t) {
    case Table::A: {
        // Rerouting the block is harmless iff both of its slots read alike.
        const BlockAddr blk = block_from_ordinal(p, pos);
        const LineRef line = line_of(blk);
        for (u64 i = 0; i < p.b(); ++i)
            if (st.b().get(st.b_pos(line, i)) != st.c().get(st.c_pos(blk.x, blk.y, i)))
                return false;
        return true;
    }
    case Table::B: {
        // Harmless iff no block on the slot's line routes to B.
        u64 s = 1;
        while (s < p.b() && b_offset(p, s + 1) <= pos) ++s;
        const u64 ordinal = (pos - b_offset(p, s)) / p.b();
        for (const auto& pt : points_on_line(p, line_from_ordinal(p, s, ordinal)))
            if (!st.a().get(st.a_pos({s, pt.x, pt.y}))) return false;
        return true;
    }
    case Table::C: {
        // Harmless iff no block at the slot's coordinates routes to C.
        const u64 cell = pos / p.b();
        const u64 x = cell % p.grid_side();
        const u64 y = cell / p.grid_side();
        for (u64 s = 1; s <= p.b(); ++s)
            if (st.a().get(st.a_pos({s, x, y}))) return false;
        return true;
    }
    }
    return false;
}

FaultReport fault_sweep(u64 b, u64 structures, u64 seed) {
    const Params p(b);
    SubsetRng rng(seed);
    FaultReport fr;
    for (u64 k = 0; k < structures; ++k) {
        const std::vector<u64> subset = rng.subset(p.universe_size(), kMaxMembers);
        std::vector<ElementAddr> members;
        for (u64 n : subset) members.push_back(element_from_ordinal(p, n));
        const Structure base = build(p, members);
        ++fr.structures;
        for (Table t : {Table::A, Table::B, Table::C}) {
            for (u64 pos = 0; pos < base.table(t).size(); ++pos) {
                Structure faulty = base;
                faulty.table(t).flip(pos);
                const bool detected = check_structure(faulty, subset, {}, 0).failure_count > 0;
                const bool benign = flip_is_benign(base, t, pos);
                ++fr.flips;
                if (detected) ++fr.detected;
                if (benign) ++fr.provably_benign;
                if (!detected && !benign) ++fr.unexplained;
                if (detected && benign) ++fr.mispredicted;
            }
        }
    }
    return fr;
}

std::string format_text(const VerifyReport& r) {
    std::ostringstream os;
    os << "b = " << r.b << " (m = " << Params(r.b).universe_size() << ")\n";
    os << "subsets checked:   " << r.subsets_checked << '\n';
    os << "queries checked:   " << r.queries_checked << '\n';
    os << "failures:          " << r.failure_count << '\n';
    os << "trace violations:  " << r.trace_violations << '\n';
    os << "build errors:      " << r.build_errors << '\n';
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", r.elapsed.count());
    os << "elapsed seconds:   " << secs << '\n';
    os << "case histogram:\n";
    for (CaseLabel c : kAllCaseLabels) {
        auto it = r.case_histogram.find(c);
        os << "  " << to_string(c) << ": " << (it == r.case_histogram.end() ? 0 : it->second)
           << '\n';
    }
    for (const auto& f : r.failures) {
        os << "FAIL S={";
        for (std::size_t j = 0; j < f.subset.size(); ++j) os << (j ? "," : "") << f.subset[j];
        os << "}";
        if (!f.note.empty()) {
            os << " build error: " << f.note << '\n';
            continue;
        }
        os << " e=" << f.element << " expected=" << f.expected << " got=" << f.got << " trace=";
        os << table_name(f.trace[0].table) << '[' << f.trace[0].pos << "]=" << f.trace[0].value
           << " ; " << table_name(f.trace[1].table) << '[' << f.trace[1].pos
           << "]=" << f.trace[1].value << '\n';
    }
    os << (r.passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

std::string format_csv(const VerifyReport& r) {
    std::ostringstream os;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", r.elapsed.count());
    os << "b,subsets,queries,failures,seconds\n";
    os << r.b << ',' << r.subsets_checked << ',' << r.queries_checked << ',' << r.failure_count
       << ',' << secs << '\n';
    os << "label,count\n";
    for (CaseLabel c : kAllCaseLabels) {
        auto it = r.case_histogram.find(c);
        os << to_string(c) << ',' << (it == r.case_histogram.end() ? 0 : it->second) << '\n';
    }
    return os.str();
}

std::string format_space_text(const std::vector<SpaceRow>& rows) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%4s %14s %14s %14s %14s %10s\n", "b", "|A|", "|B|", "|C|",
                  "total", "total/b^5");
    os << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%4llu %14llu %14llu %14llu %14llu %10.4f\n",
                      static_cast<unsigned long long>(r.b),
                      static_cast<unsigned long long>(r.a_bits),
                      static_cast<unsigned long long>(r.b_bits),
                      static_cast<unsigned long long>(r.c_bits),
                      static_cast<unsigned long long>(r.total), r.ratio);
        os << line;
    }
    return os.str();
}

std::string format_space_csv(const std::vector<SpaceRow>& rows) {
    std::ostringstream os;
    os << "b,a_bits,b_bits,c_bits,total,ratio\n";
    char ratio[32];
    for (const auto& r : rows) {
        std::snprintf(ratio, sizeof ratio, "%.4f", r.ratio);
        os << r.b << ',' << r.a_bits << ',' << r.b_bits << ',' << r.c_bits << ',' << r.total << ','
           << ratio << '\n';
    }
    return os.str();
}

} // namespace bitprobe
