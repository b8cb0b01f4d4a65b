// bitprobe - build, query, verify and inspect two-probe membership structures.
//
// Exit codes: 0 success / PASS / YES, 1 NO / verification failure, 2 error.

#include "bitprobe/geometry.hpp"
#include "bitprobe/oracle.hpp"
#include "bitprobe/scheme.hpp"
#include "bitprobe/tables.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace bitprobe;

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;

/// Bad command-line input; reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

u64 parse_u64(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    return v;
}

std::vector<u64> parse_set(const std::string& spec) {
    std::vector<u64> out;
    std::string_view rest = spec;
    if (rest.find_first_not_of(' ') == std::string_view::npos) return out;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(parse_u64(rest.substr(0, comma), "element ordinal"));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

Params resolve_params(const std::optional<u64>& b, const std::optional<u64>& m) {
    if (b) return Params(*b);
    if (m) {
        const Params p = Params::for_universe(*m);
        if (p.universe_size() != *m)
            std::cout << "note: m = " << *m << " is not a sixth power; using b = " << p.b()
                      << " and padded universe size " << p.universe_size() << '\n';
        return p;
    }
    throw UsageError("one of --b or --m is required");
}

void print_sizes(const Params& p) {
    std::cout << "b = " << p.b() << ", m = " << p.universe_size() << '\n'
              << "|A| = " << table_a_bits(p) << " bits\n"
              << "|B| = " << table_b_bits(p) << " bits\n"
              << "|C| = " << table_c_bits(p) << " bits\n"
              << "total = " << total_bits(p) << " bits\n";
}

std::string element_label(const Params& p, u64 n, bool tuple) {
    std::string s = std::to_string(n);
    if (tuple) s += " " + to_string(element_from_ordinal(p, n));
    return s;
}

std::pair<u64, u64> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw UsageError("--b-range must look like LO..HI");
    const u64 lo = parse_u64(std::string_view(text).substr(0, dots), "range bound");
    const u64 hi = parse_u64(std::string_view(text).substr(dots + 2), "range bound");
    if (lo > hi) throw UsageError("--b-range is empty");
    return {lo, hi};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-probe adaptive membership structures for subsets of at most four elements"};
    app.require_subcommand(1);

    std::optional<u64> opt_b, opt_m;
    std::string set_spec, out_path, in_path, b_range;
    u64 element = 0, trials = 0, seed = 1, subset_n = 4, max_n = 4;
    unsigned threads = 0;
    double budget = 1e9;
    bool exhaustive = false, csv = false;
    std::string fmt = "ordinal";

    auto* build_cmd = app.add_subcommand("build", "Build and store a structure for a subset");
    auto* b_opt = build_cmd->add_option("--b", opt_b, "Block size b (universe m = b^6)");
    build_cmd->add_option("--m", opt_m, "Universe size; rounded up to the next sixth power")
        ->excludes(b_opt);
    build_cmd->add_option("--set", set_spec, "Comma-separated element ordinals (at most four)");
    build_cmd->add_option("--out", out_path, "Output file")->required();
    build_cmd->add_option("--fmt", fmt, "Element format: ordinal or tuple")
        ->check(CLI::IsMember({"ordinal", "tuple"}));

    auto* query_cmd = app.add_subcommand("query", "Answer one membership query");
    query_cmd->add_option("--in", in_path, "Structure file")->required();
    query_cmd->add_option("--element", element, "Element ordinal")->required();
    query_cmd->add_option("--fmt", fmt, "Element format: ordinal or tuple")
        ->check(CLI::IsMember({"ordinal", "tuple"}));

    auto* verify_cmd = app.add_subcommand("verify", "Check the scheme against brute force");
    verify_cmd->add_option("--b", opt_b, "Block size b")->required();
    auto* ex_opt = verify_cmd->add_flag("--exhaustive", exhaustive, "Every subset of size <= --max-n");
    verify_cmd->add_option("--max-n", max_n, "Largest subset size for --exhaustive");
    verify_cmd->add_option("--budget", budget, "Refuse exhaustive runs above this many queries");
    verify_cmd->add_option("--trials", trials, "Number of random subsets")->excludes(ex_opt);
    verify_cmd->add_option("--seed", seed, "Seed for random subsets");
    verify_cmd->add_option("--n", subset_n, "Size of each random subset");
    verify_cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    verify_cmd->add_flag("--csv", csv, "CSV report");

    auto* stats_cmd = app.add_subcommand("stats", "Exact table sizes over a range of b");
    stats_cmd->add_option("--b-range", b_range, "Range LO..HI")->required();
    stats_cmd->add_flag("--csv", csv, "CSV output");

    auto* dump_cmd = app.add_subcommand("dump", "Print a stored structure");
    dump_cmd->add_option("--in", in_path, "Structure file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        const bool tuple = fmt == "tuple";

        if (*build_cmd) {
            const Params p = resolve_params(opt_b, opt_m);
            std::vector<ElementAddr> members;
            for (u64 n : parse_set(set_spec)) members.push_back(element_from_ordinal(p, n));
            const Structure st = build(p, members);
            write_file(out_path, st);
            print_sizes(p);
            if (tuple)
                for (const auto& e : members)
                    std::cout << "member " << element_label(p, element_to_ordinal(p, e), true) << '\n';
            std::cout << "wrote " << out_path << '\n';
            return kExitYes;
        }

        if (*query_cmd) {
            const Structure st = read_file(in_path);
            const Params& p = st.params();
            const QueryResult r = query(st, element_from_ordinal(p, element));
            std::cout << (r.member ? "YES" : "NO");
            if (tuple) std::cout << ' ' << element_label(p, element, true);
            std::cout << '\n';
            std::cout << table_name(r.trace[0].table) << '[' << r.trace[0].pos
                      << "]=" << r.trace[0].value << " ; " << table_name(r.trace[1].table) << '['
                      << r.trace[1].pos << "]=" << r.trace[1].value << '\n';
            return r.member ? kExitYes : kExitNo;
        }

        if (*verify_cmd) {
            VerifyOptions opt;
            opt.max_n = max_n;
            opt.threads = threads;
            opt.query_budget = budget;
            VerifyReport rep;
            if (exhaustive)
                rep = verify_exhaustive(*opt_b, opt);
            else if (trials > 0)
                rep = verify_random(*opt_b, trials, seed, subset_n, opt);
            else
                throw UsageError("verify needs --exhaustive or --trials T");
            std::cout << (csv ? format_csv(rep) : format_text(rep));
            return rep.passed() ? kExitYes : kExitNo;
        }

        if (*stats_cmd) {
            const auto [lo, hi] = parse_range(b_range);
            const auto rows = space_audit(lo, hi);
            std::cout << (csv ? format_space_csv(rows) : format_space_text(rows));
            return kExitYes;
        }

        if (*dump_cmd) {
            const Structure st = read_file(in_path);
            print_sizes(st.params());
            for (Table t : {Table::A, Table::B, Table::C}) {
                const auto bits = st.table(t).set_positions();
                std::cout << table_name(t) << " set bits (" << bits.size() << "):";
                for (u64 k : bits) std::cout << ' ' << k;
                std::cout << '\n';
            }
            return kExitYes;
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitError;
    } catch (const NoValidAssignment& e) {
        std::cerr << "INTERNAL ERROR: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
