// floorprimes: prime statistics of the floor quotient set {floor(x/n)}.
//
// Subcommands: gx, fx, fpp, blocks, constants, scan, report.
// Output is CSV (default for point queries) or JSON lines (default for
// scan); stdout is byte-deterministic for identical flags, timing goes to
// stderr.  Exit codes: 0 success or findings, 1 usage, 2 theorem
// counterexample, 3 I/O failure.

#include <atomic>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "floorprimes/asympt.hpp"
#include "floorprimes/constants.hpp"
#include "floorprimes/floorset.hpp"
#include "floorprimes/identities.hpp"
#include "floorprimes/output.hpp"
#include "floorprimes/primal.hpp"

using namespace floorprimes;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCounterexample = 2;
constexpr int kExitIo = 3;

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted.store(true); }

// Accepts plain integers and integral scientific notation ("1e6").
std::uint64_t parse_u64(const std::string& tok, const char* what) {
    std::string t = tok;
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    if (t.empty()) throw std::invalid_argument(std::string(what) + ": empty number");
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec == std::errc() && p == t.data() + t.size()) return v;
    errno = 0;
    char* end = nullptr;
    const long double d = strtold(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size() || !(d >= 0) || d > 1.8e19L ||
        floorl(d) != d)
        throw std::invalid_argument(std::string(what) + ": cannot parse '" + tok +
                                    "' as a nonnegative integer");
    return static_cast<std::uint64_t>(d);
}

std::vector<std::uint64_t> parse_point_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
        out.push_back(parse_u64(tok, "--points"));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("--points: empty list");
    return out;
}

// "LO:HI" (factor 10) or "LO:HI:FACTOR" with FACTOR a real > 1 or the token
// sqrt10; geometric grid, endpoints rounded to nearest integer.
std::vector<std::uint64_t> parse_grid(const std::string& text) {
    const std::size_t c1 = text.find(':');
    if (c1 == std::string::npos) throw std::invalid_argument("--grid: expected LO:HI[:FACTOR]");
    const std::size_t c2 = text.find(':', c1 + 1);
    const std::uint64_t lo = parse_u64(text.substr(0, c1), "--grid LO");
    const std::uint64_t hi = parse_u64(
        text.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1),
        "--grid HI");
    long double factor = 10.0L;
    if (c2 != std::string::npos) {
        const std::string f = text.substr(c2 + 1);
        if (f == "sqrt10") {
            factor = sqrtl(10.0L);
        } else {
            errno = 0;
            char* end = nullptr;
            factor = strtold(f.c_str(), &end);
            if (errno != 0 || end != f.c_str() + f.size() || !(factor > 1.0L))
                throw std::invalid_argument("--grid: FACTOR must be a real > 1 or sqrt10");
        }
    }
    if (lo < 1 || hi < lo) throw std::invalid_argument("--grid: need 1 <= LO <= HI");
    std::vector<std::uint64_t> out;
    long double v = static_cast<long double>(lo);
    for (;;) {
        const std::uint64_t x = static_cast<std::uint64_t>(roundl(v));
        if (x > hi) break;
        if (out.empty() || out.back() != x) out.push_back(x);
        v *= factor;
    }
    if (out.empty() || out.back() != hi) out.push_back(hi);
    return out;
}

OutputFormat parse_format(const std::string& tok) {
    auto f = output_format_from_string(tok);
    if (!f) throw std::invalid_argument("--format: expected csv, jsonl or json");
    return *f;
}

std::string factors_text(const std::vector<PrimeFactor>& fs) {
    std::string out;
    for (const auto& f : fs) {
        if (!out.empty()) out += '*';
        out += std::to_string(f.prime);
        if (f.exponent > 1) {
            out += '^';
            out += std::to_string(f.exponent);
        }
    }
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    void report() const {
        const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        std::fprintf(stderr, "elapsed_ms=%.3f\n", static_cast<double>(ns) / 1e6);
    }
};

// ----- gx / fx / fpp ------------------------------------------------------

struct PointCmd {
    std::string x_tok;
    std::string format = "csv";
    bool brute = false;
    std::uint64_t oracle_ceiling = kDefaultOracleCeiling;
};

int run_point_cmd(const PointCmd& o, const char* name) {
    const std::uint64_t x = parse_u64(o.x_tok, "x");
    if (x < 1) throw std::invalid_argument("x must be >= 1");
    const std::string kind = name;
    Timer timer;
    std::uint64_t value = 0;
    if (o.brute) {
        if (kind == "gx") value = prime_value_count_brute(x, o.oracle_ceiling);
        else if (kind == "fx") value = prime_index_count_brute(x, o.oracle_ceiling);
        else value = prime_power_index_count_brute(x, o.oracle_ceiling);
    } else {
        if (kind == "gx") value = prime_value_count(x);
        else if (kind == "fx") value = prime_index_count(x);
        else value = prime_power_index_count(x);
    }
    RowWriter w(std::cout, parse_format(o.format));
    w.write({{{"x", x}, {"value", value}, {"method", std::string(o.brute ? "brute" : "fast")}}});
    timer.report();
    return kExitOk;
}

// ----- blocks -------------------------------------------------------------

struct BlocksCmd {
    std::string x_tok;
    std::string format = "csv";
    std::uint64_t max_rows = 100'000;
    bool force = false;
};

int run_blocks(const BlocksCmd& o) {
    const std::uint64_t x = parse_u64(o.x_tok, "x");
    if (x < 1) throw std::invalid_argument("x must be >= 1");
    const std::uint64_t rows = distinct_quotient_count(x);
    if (rows > o.max_rows && !o.force)
        throw std::domain_error("blocks: " + std::to_string(rows) + " rows exceed --max-rows " +
                                std::to_string(o.max_rows) + " (pass --force to emit anyway)");
    RowWriter w(std::cout, parse_format(o.format));
    for_each_block(x, [&](const FloorBlock& b) {
        w.write({{{"value", b.value},
                  {"n_lo", b.n_lo},
                  {"n_hi", b.n_hi},
                  {"is_prime", is_prime(b.value)}}});
    });
    return kExitOk;
}

// ----- constants ----------------------------------------------------------

struct ConstantsCmd {
    unsigned depth = 64;
    std::string prime_limit_tok = "1000000";
    std::string format = "csv";
};

int run_constants(const ConstantsCmd& o) {
    if (o.depth < 2) throw std::invalid_argument("--depth must be >= 2");
    const std::uint64_t prime_limit = parse_u64(o.prime_limit_tok, "--prime-limit");
    if (prime_limit < 2) throw std::invalid_argument("--prime-limit must be >= 2");
    RowWriter w(std::cout, parse_format(o.format));
    auto emit = [&](const char* constant, const ConstantEstimate& e) {
        OutputRow row;
        row.cols.push_back({"constant", std::string(constant)});
        row.cols.push_back({"method", std::string(to_string(e.method))});
        row.cols.push_back({"value", e.value});
        row.cols.push_back({"error_bound", e.error_bound});
        row.cols.push_back({"depth", e.depth ? OutputValue(std::uint64_t{e.depth})
                                             : OutputValue(std::monostate{})});
        row.cols.push_back({"prime_limit", e.prime_limit ? OutputValue(e.prime_limit)
                                                         : OutputValue(std::monostate{})});
        w.write(row);
    };
    emit("P", constant_P_series(o.depth));
    emit("P", constant_P_direct(prime_limit));
    emit("D", constant_D_series(o.depth));
    emit("D", constant_D_direct(prime_limit));
    return kExitOk;
}

// ----- scan ---------------------------------------------------------------

struct ScanCmd {
    std::string filter_tok;
    std::string from_tok = "2";
    std::string to_tok;
    std::string checkpoint;
    bool resume = false;
    unsigned workers = 1;
    std::uint64_t chunk_size = 4096;
    std::uint64_t checkpoint_every = 100'000;
    unsigned abort_after_checkpoints = 0;
    std::string format = "jsonl";
};

void scan_row_base(OutputRow& row, const std::string& kind) {
    row.cols.push_back({"kind", kind});
}

OutputRow finding_row(const DeltaRecord& r) {
    OutputRow row;
    scan_row_base(row, "finding");
    row.cols.push_back({"x", r.x});
    row.cols.push_back({"class", std::string(to_string(r.cls))});
    row.cols.push_back({"factors", factors_text(r.factors)});
    row.cols.push_back({"g_x", r.g_x});
    row.cols.push_back({"g_prev", r.g_prev});
    row.cols.push_back({"delta", r.delta});
    row.cols.push_back({"predicted", r.predicted ? OutputValue(std::int64_t{*r.predicted})
                                                 : OutputValue(std::monostate{})});
    row.cols.push_back({"agrees", r.agrees ? OutputValue(*r.agrees)
                                           : OutputValue(std::monostate{})});
    return row;
}

int run_scan(const ScanCmd& o) {
    auto filter = scan_filter_from_string(o.filter_tok);
    if (!filter)
        throw std::invalid_argument(
            "scan: filter must be one of theorem2, theorem3, conjecture4");
    if (o.to_tok.empty()) throw std::invalid_argument("scan: --to is required");
    ScanRange range{parse_u64(o.from_tok, "--from"), parse_u64(o.to_tok, "--to")};
    if (range.lo < 2 || range.lo > range.hi)
        throw std::invalid_argument("scan: need 2 <= from <= to");

    PrimeSieve sieve(range.hi > 1 ? range.hi : 2);

    // CSV needs one stable column set across finding and summary rows; the
    // summary's tail columns ride along as nulls on findings and vice versa.
    const bool csv = parse_format(o.format) == OutputFormat::csv;
    RowWriter w(std::cout, parse_format(o.format));
    auto pad_finding = [&](OutputRow row) {
        if (csv) {
            for (const char* c : {"filter", "from", "to", "last_completed_x", "checked",
                                  "agreement_count", "counterexamples"})
                row.cols.push_back({c, std::monostate{}});
        }
        return row;
    };

    ScanOptions opts;
    opts.workers = o.workers;
    opts.chunk_size = o.chunk_size;
    opts.checkpoint_every = o.checkpoint_every;
    opts.checkpoint_path = o.checkpoint;
    opts.resume = o.resume;
    opts.sieve = &sieve;
    opts.abort_after_checkpoints = o.abort_after_checkpoints;
    opts.stop = &g_interrupted;
    opts.on_finding = [&](const DeltaRecord& r) {
        w.write(pad_finding(finding_row(r)));
        std::cout.flush();
    };

    std::signal(SIGINT, on_sigint);
    ScanReport report = scan(range, *filter, opts);

    // on_finding streamed rows for findings made in this run; findings
    // carried in from a resumed checkpoint are counted in the summary.
    OutputRow summary;
    scan_row_base(summary, "summary");
    if (csv) {
        for (const char* c : {"x", "class", "factors", "g_x", "g_prev", "delta", "predicted",
                              "agrees"})
            summary.cols.push_back({c, std::monostate{}});
    }
    summary.cols.push_back({"filter", std::string(to_string(report.filter))});
    summary.cols.push_back({"from", report.range.lo});
    summary.cols.push_back({"to", report.range.hi});
    summary.cols.push_back({"last_completed_x", report.last_completed_x});
    summary.cols.push_back({"checked", report.checked});
    summary.cols.push_back({"agreement_count", report.agreement_count});
    summary.cols.push_back({"counterexamples", std::uint64_t(report.counterexamples.size())});
    w.write(summary);

    if (!report.complete())
        std::fprintf(stderr, "scan interrupted at x=%llu; resume with --resume --checkpoint\n",
                     static_cast<unsigned long long>(report.last_completed_x));
    const bool theorem = *filter != ScanFilter::conjecture4;
    return (theorem && !report.counterexamples.empty()) ? kExitCounterexample : kExitOk;
}

// ----- report -------------------------------------------------------------

struct ReportCmd {
    std::string kind_tok;
    std::string points;
    std::string grid;
    bool bounds = false;
    std::string format = "csv";
};

int run_report(const ReportCmd& o) {
    if (o.kind_tok != "gx" && o.kind_tok != "fx" && o.kind_tok != "fpp")
        throw std::invalid_argument("report: kind must be one of gx, fx, fpp");
    if (o.points.empty() == o.grid.empty())
        throw std::invalid_argument("report: exactly one of --points or --grid is required");
    const std::vector<std::uint64_t> pts =
        o.points.empty() ? parse_grid(o.grid) : parse_point_list(o.points);
    if (o.bounds && o.kind_tok != "fx")
        throw std::invalid_argument("report: --bounds applies to fx only");

    std::vector<AsymptoticSample> samples;
    if (o.kind_tok == "gx") samples = gx_report(pts);
    else if (o.kind_tok == "fx") samples = fx_report(pts);
    else samples = fx_primepower_report(pts);

    const bool csv = parse_format(o.format) == OutputFormat::csv;
    RowWriter w(std::cout, parse_format(o.format));
    for (const auto& s : samples) {
        OutputRow row;
        row.cols.push_back({"kind", std::string("sample")});
        row.cols.push_back({"rule", std::string(to_string(s.rule))});
        row.cols.push_back({"x", s.x});
        row.cols.push_back({"exact", s.exact});
        row.cols.push_back({"main_term", s.main_term});
        row.cols.push_back({"residual", s.residual});
        row.cols.push_back({"normalized", s.normalized});
        if (csv || o.bounds) {
            row.cols.push_back({"a1_emp", std::monostate{}});
            row.cols.push_back({"a2_emp", std::monostate{}});
        }
        w.write(row);
        if (exceeds_soft_bound(s))
            std::fprintf(stderr,
                         "warning: |normalized residual| %s exceeds soft bound %s at x=%llu "
                         "(rule %s)\n",
                         format_real(s.normalized).c_str(), format_real(soft_bound(s.rule)).c_str(),
                         static_cast<unsigned long long>(s.x), to_string(s.rule));
    }
    if (o.bounds) {
        const Theorem5Bounds b = theorem5_bounds(pts);
        OutputRow row;
        row.cols.push_back({"kind", std::string("bounds")});
        row.cols.push_back({"rule", std::string("fx")});
        for (const char* c : {"x", "exact", "main_term", "residual", "normalized"})
            row.cols.push_back({c, std::monostate{}});
        row.cols.push_back({"a1_emp", b.a1_emp});
        row.cols.push_back({"a2_emp", b.a2_emp});
        w.write(row);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prime statistics of the floor quotient set {floor(x/n) : 1 <= n <= x}"};
    app.require_subcommand(1);

    PointCmd gx_opts, fx_opts, fpp_opts;
    auto add_point_cmd = [&](const char* name, const char* desc, PointCmd& o) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->add_option("x", o.x_tok, "evaluation point (integer, 1e6 notation accepted)")
            ->required();
        c->add_option("--format", o.format, "csv, jsonl or json")->envname("FLOORSET_FORMAT");
        c->add_flag("--brute", o.brute, "force the literal 1..x oracle path")
            ->envname("FLOORSET_BRUTE");
        c->add_option("--oracle-ceiling", o.oracle_ceiling,
                      "largest x the brute path accepts")
            ->envname("FLOORSET_ORACLE_CEILING");
        return c;
    };
    add_point_cmd("gx", "count primes among the distinct quotients of x", gx_opts);
    add_point_cmd("fx", "count n <= x with floor(x/n) prime", fx_opts);
    add_point_cmd("fpp", "count n <= x with floor(x/n) a prime power", fpp_opts);

    BlocksCmd blocks_opts;
    CLI::App* blocks_cmd = app.add_subcommand("blocks", "list the constant-quotient blocks of x");
    blocks_cmd->add_option("x", blocks_opts.x_tok, "evaluation point")->required();
    blocks_cmd->add_option("--format", blocks_opts.format, "csv, jsonl or json")
        ->envname("FLOORSET_FORMAT");
    blocks_cmd->add_option("--max-rows", blocks_opts.max_rows, "refuse to emit more rows than this")
        ->envname("FLOORSET_MAX_ROWS");
    blocks_cmd->add_flag("--force", blocks_opts.force, "emit past --max-rows")
        ->envname("FLOORSET_FORCE");

    ConstantsCmd const_opts;
    CLI::App* const_cmd =
        app.add_subcommand("constants", "series and bracket estimates for P and D");
    const_cmd->add_option("--depth", const_opts.depth, "series truncation depth (>= 2)")
        ->envname("FLOORSET_DEPTH");
    const_cmd->add_option("--prime-limit", const_opts.prime_limit_tok,
                          "direct-bracket enumeration limit (>= 2)")
        ->envname("FLOORSET_PRIME_LIMIT");
    const_cmd->add_option("--format", const_opts.format, "csv, jsonl or json")
        ->envname("FLOORSET_FORMAT");

    ScanCmd scan_opts;
    CLI::App* scan_cmd = app.add_subcommand(
        "scan", "check a one-step identity over a range, with resumable checkpoints");
    scan_cmd->add_option("filter", scan_opts.filter_tok, "theorem2 | theorem3 | conjecture4")
        ->required();
    scan_cmd->add_option("--from", scan_opts.from_tok, "range start (default 2)")
        ->envname("FLOORSET_FROM");
    scan_cmd->add_option("--to", scan_opts.to_tok, "range end (inclusive)")->envname("FLOORSET_TO");
    scan_cmd->add_option("--checkpoint", scan_opts.checkpoint, "checkpoint file path")
        ->envname("FLOORSET_CHECKPOINT");
    scan_cmd->add_flag("--resume", scan_opts.resume, "continue from the checkpoint file")
        ->envname("FLOORSET_RESUME");
    scan_cmd->add_option("--workers", scan_opts.workers, "worker thread count")
        ->envname("FLOORSET_WORKERS");
    scan_cmd->add_option("--chunk-size", scan_opts.chunk_size, "x per work chunk")
        ->envname("FLOORSET_CHUNK_SIZE");
    scan_cmd->add_option("--checkpoint-every", scan_opts.checkpoint_every,
                         "processed x between checkpoints")
        ->envname("FLOORSET_CHECKPOINT_EVERY");
    scan_cmd->add_option("--abort-after-checkpoints", scan_opts.abort_after_checkpoints,
                         "testing hook: stop after writing N checkpoints")
        ->envname("FLOORSET_ABORT_AFTER_CHECKPOINTS");
    scan_cmd->add_option("--format", scan_opts.format, "csv, jsonl or json")
        ->envname("FLOORSET_FORMAT");

    ReportCmd report_opts;
    CLI::App* report_cmd =
        app.add_subcommand("report", "normalized-residual tables against the main terms");
    report_cmd->add_option("kind", report_opts.kind_tok, "gx | fx | fpp")->required();
    report_cmd->add_option("--points", report_opts.points, "comma-separated x values")
        ->envname("FLOORSET_POINTS");
    report_cmd->add_option("--grid", report_opts.grid, "LO:HI[:FACTOR] geometric grid")
        ->envname("FLOORSET_GRID");
    report_cmd->add_flag("--bounds", report_opts.bounds, "append the empirical envelope row (fx)")
        ->envname("FLOORSET_BOUNDS");
    report_cmd->add_option("--format", report_opts.format, "csv, jsonl or json")
        ->envname("FLOORSET_FORMAT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("gx")) return run_point_cmd(gx_opts, "gx");
        if (app.got_subcommand("fx")) return run_point_cmd(fx_opts, "fx");
        if (app.got_subcommand("fpp")) return run_point_cmd(fpp_opts, "fpp");
        if (app.got_subcommand("blocks")) return run_blocks(blocks_opts);
        if (app.got_subcommand("constants")) return run_constants(const_opts);
        if (app.got_subcommand("scan")) return run_scan(scan_opts);
        if (app.got_subcommand("report")) return run_report(report_opts);
        std::fprintf(stderr, "no subcommand\n");
        return kExitUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const CheckpointMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
}
