#pragma once

// One-step difference identities for G(x) = prime_value_count(x) and the
// machine checkers behind the scan command.
//
// Writing delta(x) = G(x) - G(x-1), the checkers test:
//   theorem2     x prime, x != 3             =>  delta = 1
//   theorem3     x = p*q, p <= q odd primes  =>  delta = 1
//   conjecture4  x = p1*p2*p3, 2 < p1 < p2 < p3 distinct odd primes
//                                            =>  delta = 0 if p1*p2 > p3, else 1
//
// x = 3 is the excluded case of the prime identity: G(3) - G(2) = 0, so the
// record for 3 carries no prediction.  A record stores the exact delta next
// to the predicted value; a disagreement is a reportable finding, never an
// assert — for the two theorems it signals an implementation bug (exit code
// 2 in the CLI), for the conjecture it is science (exit code 0).

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "floorset.hpp"
#include "primal.hpp"

namespace floorprimes {

enum class XClass { prime, odd_semiprime, three_distinct_odd_primes, other };

inline const char* to_string(XClass c) {
    switch (c) {
        case XClass::prime: return "prime";
        case XClass::odd_semiprime: return "odd_semiprime";
        case XClass::three_distinct_odd_primes: return "three_distinct_odd_primes";
        case XClass::other: return "other";
    }
    return "other";
}

struct Classification {
    XClass cls;
    std::vector<PrimeFactor> factors;
};

// Classify x >= 2 by factorization shape.  odd_semiprime means p*q with
// p <= q odd primes, not necessarily distinct, so odd prime squares count
// (9 is odd_semiprime); even semiprimes fall into other.
inline Classification classify(std::uint64_t x) {
    if (x < 2) throw std::invalid_argument("classify: x must be >= 2");
    Classification c{XClass::other, factorize(x)};
    const auto& f = c.factors;
    const bool odd = f[0].prime > 2;
    if (f.size() == 1 && f[0].exponent == 1) {
        c.cls = XClass::prime;
    } else if (odd && ((f.size() == 2 && f[0].exponent == 1 && f[1].exponent == 1) ||
                       (f.size() == 1 && f[0].exponent == 2))) {
        c.cls = XClass::odd_semiprime;
    } else if (odd && f.size() == 3 && f[0].exponent == 1 && f[1].exponent == 1 &&
               f[2].exponent == 1) {
        c.cls = XClass::three_distinct_odd_primes;
    }
    return c;
}

// One scan observation: the exact one-step difference of G at x together
// with the class-based prediction.  predicted is empty exactly when no
// prediction is defined for x (class other, or the excluded prime 3).
struct DeltaRecord {
    std::uint64_t x = 0;
    XClass cls = XClass::other;
    std::vector<PrimeFactor> factors;
    std::uint64_t g_x = 0;
    std::uint64_t g_prev = 0;   // G(x-1)
    std::int64_t delta = 0;     // g_x - g_prev, can be negative
    std::optional<int> predicted;
    std::optional<bool> agrees;
    friend bool operator==(const DeltaRecord&, const DeltaRecord&) = default;
};

namespace detail {

inline std::optional<int> predict_delta(const Classification& c) {
    switch (c.cls) {
        case XClass::prime:
            if (c.factors[0].prime == 3) return std::nullopt;  // excluded case
            return 1;
        case XClass::odd_semiprime:
            return 1;
        case XClass::three_distinct_odd_primes: {
            const std::uint64_t p1 = c.factors[0].prime;
            const std::uint64_t p2 = c.factors[1].prime;
            const std::uint64_t p3 = c.factors[2].prime;
            return (p1 * p2 > p3) ? 0 : 1;
        }
        case XClass::other:
            return std::nullopt;
    }
    return std::nullopt;
}

inline DeltaRecord make_record(std::uint64_t x, Classification cls, const PrimeSieve* sieve) {
    DeltaRecord r;
    r.x = x;
    r.cls = cls.cls;
    r.factors = std::move(cls.factors);
    r.g_x = prime_value_count(x, sieve);
    r.g_prev = x >= 2 ? prime_value_count(x - 1, sieve) : 0;
    r.delta = static_cast<std::int64_t>(r.g_x) - static_cast<std::int64_t>(r.g_prev);
    r.predicted = predict_delta({r.cls, r.factors});
    if (r.predicted) r.agrees = (*r.predicted == r.delta);
    return r;
}

}  // namespace detail

// Check the prime-step identity at x = p.  Throws unless p is prime.
inline DeltaRecord check_prime_step(std::uint64_t p, const PrimeSieve* sieve = nullptr) {
    auto c = classify(p);
    if (c.cls != XClass::prime) throw std::invalid_argument("check_prime_step: p must be prime");
    return detail::make_record(p, std::move(c), sieve);
}

// Check the semiprime-step identity at x = p*q, p <= q odd primes.  Throws
// for any other class.
inline DeltaRecord check_semiprime_step(std::uint64_t x, const PrimeSieve* sieve = nullptr) {
    auto c = classify(x);
    if (c.cls != XClass::odd_semiprime)
        throw std::invalid_argument(
            "check_semiprime_step: x must be a product of two odd primes (p <= q)");
    return detail::make_record(x, std::move(c), sieve);
}

// Check the three-prime prediction at x = p1*p2*p3.  Throws unless x is a
// product of three distinct odd primes.
inline DeltaRecord check_conjecture4(std::uint64_t x, const PrimeSieve* sieve = nullptr) {
    auto c = classify(x);
    if (c.cls != XClass::three_distinct_odd_primes)
        throw std::invalid_argument(
            "check_conjecture4: x must be a product of three distinct odd primes");
    return detail::make_record(x, std::move(c), sieve);
}

// ---------------------------------------------------------------------------
// Range scanning with resumable checkpoints.

enum class ScanFilter { theorem2, theorem3, conjecture4 };

inline const char* to_string(ScanFilter f) {
    switch (f) {
        case ScanFilter::theorem2: return "theorem2";
        case ScanFilter::theorem3: return "theorem3";
        case ScanFilter::conjecture4: return "conjecture4";
    }
    return "theorem2";
}

inline std::optional<ScanFilter> scan_filter_from_string(std::string_view s) {
    if (s == "theorem2") return ScanFilter::theorem2;
    if (s == "theorem3") return ScanFilter::theorem3;
    if (s == "conjecture4") return ScanFilter::conjecture4;
    return std::nullopt;
}

struct ScanRange {
    std::uint64_t lo;
    std::uint64_t hi;
    friend bool operator==(const ScanRange&, const ScanRange&) = default;
};

// Scan state, also the exact content of a checkpoint file.  checked counts
// every examined x matching the class filter; members carrying a prediction
// split into agreement_count + counterexamples (the prime 3 is checked but
// predicts nothing).
struct ScanReport {
    ScanRange range{0, 0};
    ScanFilter filter = ScanFilter::theorem2;
    std::uint64_t last_completed_x = 0;
    std::uint64_t checked = 0;
    std::uint64_t agreement_count = 0;
    std::vector<DeltaRecord> counterexamples;
    bool complete() const { return last_completed_x >= range.hi; }
};

struct CheckpointMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointSchemaVersion = 1;

inline nlohmann::ordered_json record_to_json(const DeltaRecord& r) {
    nlohmann::ordered_json j;
    j["x"] = r.x;
    j["class"] = to_string(r.cls);
    auto fac = nlohmann::ordered_json::array();
    for (const auto& f : r.factors) fac.push_back({f.prime, f.exponent});
    j["factors"] = std::move(fac);
    j["g_x"] = r.g_x;
    j["g_prev"] = r.g_prev;
    j["delta"] = r.delta;
    j["predicted"] = r.predicted ? nlohmann::ordered_json(*r.predicted) : nlohmann::ordered_json(nullptr);
    j["agrees"] = r.agrees ? nlohmann::ordered_json(*r.agrees) : nlohmann::ordered_json(nullptr);
    return j;
}

inline nlohmann::ordered_json report_to_json(const ScanReport& r) {
    nlohmann::ordered_json j;
    j["schema_version"] = kCheckpointSchemaVersion;
    j["range"] = {r.range.lo, r.range.hi};
    j["filter"] = to_string(r.filter);
    j["last_completed_x"] = r.last_completed_x;
    j["checked"] = r.checked;
    j["agreement_count"] = r.agreement_count;
    auto cex = nlohmann::ordered_json::array();
    for (const auto& c : r.counterexamples) cex.push_back(record_to_json(c));
    j["counterexamples"] = std::move(cex);
    return j;
}

namespace detail {

inline DeltaRecord record_from_json(const nlohmann::json& j) {
    DeltaRecord r;
    r.x = j.at("x").get<std::uint64_t>();
    const std::string cls = j.at("class").get<std::string>();
    if (cls == "prime") r.cls = XClass::prime;
    else if (cls == "odd_semiprime") r.cls = XClass::odd_semiprime;
    else if (cls == "three_distinct_odd_primes") r.cls = XClass::three_distinct_odd_primes;
    else r.cls = XClass::other;
    for (const auto& f : j.at("factors"))
        r.factors.push_back({f.at(0).get<std::uint64_t>(), f.at(1).get<unsigned>()});
    r.g_x = j.at("g_x").get<std::uint64_t>();
    r.g_prev = j.at("g_prev").get<std::uint64_t>();
    r.delta = j.at("delta").get<std::int64_t>();
    if (!j.at("predicted").is_null()) r.predicted = j.at("predicted").get<int>();
    if (!j.at("agrees").is_null()) r.agrees = j.at("agrees").get<bool>();
    return r;
}

}  // namespace detail

// Serialize a report to its checkpoint file via write-then-rename, so a
// crash never leaves a torn checkpoint behind.
inline void write_scan_checkpoint(const std::string& path, const ScanReport& report) {
    const std::string tmp = path + ".tmp";
    {
        std::FILE* f = std::fopen(tmp.c_str(), "wb");
        if (!f) throw IoError("cannot open checkpoint for writing: " + tmp);
        const std::string body = report_to_json(report).dump(2) + "\n";
        const std::size_t n = std::fwrite(body.data(), 1, body.size(), f);
        const bool flushed = std::fflush(f) == 0;
        std::fclose(f);
        if (n != body.size() || !flushed)
            throw IoError("short write on checkpoint: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot rename checkpoint into place: " + path);
}

inline ScanReport load_scan_checkpoint(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open checkpoint: " + path);
    std::string body;
    char buf[1 << 14];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) body.append(buf, n);
    std::fclose(f);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
        ScanReport r;
        if (j.at("schema_version").get<int>() != kCheckpointSchemaVersion)
            throw CheckpointMismatch("checkpoint schema version mismatch");
        r.range.lo = j.at("range").at(0).get<std::uint64_t>();
        r.range.hi = j.at("range").at(1).get<std::uint64_t>();
        auto f2 = scan_filter_from_string(j.at("filter").get<std::string>());
        if (!f2) throw CheckpointMismatch("checkpoint has unknown filter");
        r.filter = *f2;
        r.last_completed_x = j.at("last_completed_x").get<std::uint64_t>();
        r.checked = j.at("checked").get<std::uint64_t>();
        r.agreement_count = j.at("agreement_count").get<std::uint64_t>();
        for (const auto& c : j.at("counterexamples"))
            r.counterexamples.push_back(detail::record_from_json(c));
        return r;
    } catch (const CheckpointMismatch&) {
        throw;
    } catch (const std::exception& e) {
        throw IoError("malformed checkpoint " + path + ": " + e.what());
    }
}

struct ScanOptions {
    unsigned workers = 1;
    std::uint64_t chunk_size = 4096;
    std::uint64_t checkpoint_every = 100'000;  // processed x per checkpoint
    std::string checkpoint_path;               // empty: no persistence
    bool resume = false;
    const PrimeSieve* sieve = nullptr;
    // Deterministic-interrupt hook for tests: stop right after writing the
    // k-th checkpoint of this run (0 = run to completion).
    unsigned abort_after_checkpoints = 0;
    // Cooperative interrupt (e.g. SIGINT): the scan stops at the next chunk
    // boundary, writing a final checkpoint if a path is configured.
    std::atomic<bool>* stop = nullptr;
    // Called in canonical x order for every record with agrees == false.
    std::function<void(const DeltaRecord&)> on_finding;
};

namespace detail {

struct ChunkStats {
    std::uint64_t checked = 0;
    std::uint64_t agreement = 0;
    std::vector<DeltaRecord> findings;
};

inline bool filter_matches(ScanFilter f, XClass c) {
    switch (f) {
        case ScanFilter::theorem2: return c == XClass::prime;
        case ScanFilter::theorem3: return c == XClass::odd_semiprime;
        case ScanFilter::conjecture4: return c == XClass::three_distinct_odd_primes;
    }
    return false;
}

inline ChunkStats scan_chunk(std::uint64_t a, std::uint64_t b, ScanFilter filter,
                             const PrimeSieve* sieve) {
    ChunkStats s;
    for (std::uint64_t x = a; x <= b; ++x) {
        Classification c = classify(x);
        if (!filter_matches(filter, c.cls)) continue;
        DeltaRecord r = make_record(x, std::move(c), sieve);
        ++s.checked;
        if (r.agrees && *r.agrees) ++s.agreement;
        if (r.agrees && !*r.agrees) s.findings.push_back(std::move(r));
    }
    return s;
}

}  // namespace detail

// Scan [range.lo, range.hi] for one-step identity violations under the
// given class filter.  Chunks are distributed over a small worker pool and
// merged strictly in range order, so reports, findings and checkpoint files
// are byte-identical for every worker count.
inline ScanReport scan(ScanRange range, ScanFilter filter, const ScanOptions& opt = {}) {
    if (range.lo < 2 || range.lo > range.hi)
        throw std::invalid_argument("scan: need 2 <= lo <= hi");

    ScanReport report;
    report.range = range;
    report.filter = filter;
    report.last_completed_x = range.lo - 1;

    if (opt.resume) {
        if (opt.checkpoint_path.empty())
            throw std::invalid_argument("scan: resume requested without a checkpoint path");
        ScanReport prev = load_scan_checkpoint(opt.checkpoint_path);
        if (!(prev.range == range) || prev.filter != filter)
            throw CheckpointMismatch(
                "checkpoint range/filter does not match the requested scan; refusing to resume");
        report = std::move(prev);
        if (report.complete()) return report;
    }

    const std::uint64_t start = report.last_completed_x + 1;
    const std::uint64_t chunk = opt.chunk_size > 0 ? opt.chunk_size : 4096;
    const std::uint64_t total_chunks = (range.hi - start) / chunk + 1;
    const unsigned nworkers =
        std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(
                                                         std::min<std::uint64_t>(total_chunks, 64))));

    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<bool> halt{false};
    std::atomic<unsigned> active{nworkers};
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::uint64_t, detail::ChunkStats> done;

    auto worker = [&] {
        for (;;) {
            if (halt.load(std::memory_order_relaxed)) break;
            if (opt.stop && opt.stop->load(std::memory_order_relaxed)) break;
            const std::uint64_t idx = next_chunk.fetch_add(1, std::memory_order_relaxed);
            if (idx >= total_chunks) break;
            const std::uint64_t a = start + idx * chunk;
            const std::uint64_t b = std::min(range.hi, a + chunk - 1);
            detail::ChunkStats s = detail::scan_chunk(a, b, filter, opt.sieve);
            {
                std::lock_guard<std::mutex> lk(mu);
                done.emplace(idx, std::move(s));
            }
            cv.notify_all();
        }
        active.fetch_sub(1, std::memory_order_relaxed);
        cv.notify_all();
    };

    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (unsigned i = 0; i < nworkers; ++i) pool.emplace_back(worker);

    const std::uint64_t every = opt.checkpoint_every > 0 ? opt.checkpoint_every : 100'000;
    std::uint64_t processed_at_last_cp = 0;
    unsigned checkpoints_written = 0;
    std::uint64_t frontier = 0;  // chunks merged so far
    bool aborted = false;

    while (frontier < total_chunks && !aborted) {
        detail::ChunkStats s;
        {
            std::unique_lock<std::mutex> lk(mu);
            cv.wait(lk, [&] {
                return done.count(frontier) > 0 || active.load(std::memory_order_relaxed) == 0;
            });
            auto it = done.find(frontier);
            if (it == done.end()) break;  // workers quit with the frontier chunk unprocessed
            s = std::move(it->second);
            done.erase(it);
        }
        const std::uint64_t chunk_end = std::min(range.hi, start + (frontier + 1) * chunk - 1);
        report.checked += s.checked;
        report.agreement_count += s.agreement;
        for (auto& f : s.findings) {
            if (opt.on_finding) opt.on_finding(f);
            report.counterexamples.push_back(std::move(f));
        }
        report.last_completed_x = chunk_end;
        ++frontier;

        const std::uint64_t processed = report.last_completed_x - range.lo + 1;
        const bool boundary = processed - processed_at_last_cp >= every;
        const bool final_chunk = frontier == total_chunks;
        const bool interrupted = opt.stop && opt.stop->load(std::memory_order_relaxed);
        if (!opt.checkpoint_path.empty() && (boundary || final_chunk || interrupted)) {
            write_scan_checkpoint(opt.checkpoint_path, report);
            processed_at_last_cp = processed;
            ++checkpoints_written;
            if (opt.abort_after_checkpoints > 0 && checkpoints_written >= opt.abort_after_checkpoints &&
                !final_chunk) {
                aborted = true;
                halt.store(true, std::memory_order_relaxed);
            }
        }
        if (interrupted) aborted = true;
    }

    halt.store(true, std::memory_order_relaxed);
    cv.notify_all();
    for (auto& t : pool) t.join();
    return report;
}

}  // namespace floorprimes
