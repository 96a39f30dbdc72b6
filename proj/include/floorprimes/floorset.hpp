#pragma once

// Counting statistics of the quotient set { floor(x/n) : 1 <= n <= x }.
//
// The workhorse is the block decomposition: as n runs over [1, x] the
// quotient v = floor(x/n) is piecewise constant, and each maximal run
// [n_lo, n_hi] satisfies n_hi = floor(x/v).  There are at most
// 2*sqrt(x) + 2 runs, so every fast counter below is O(sqrt(x)) primality
// tests.  Each fast counter has a literal O(x) brute-force twin used as a
// test oracle; the twins share nothing with the fast path beyond integer
// division.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "primal.hpp"

namespace floorprimes {

// Largest x accepted by the brute-force oracles by default; they walk all of
// 1..x, so this is a guard rail, not a correctness bound.
inline constexpr std::uint64_t kDefaultOracleCeiling = 10'000'000;

// Maximal run of n with constant quotient: floor(x/n) == value for all
// n in [n_lo, n_hi], and the runs tile [1, x] with strictly decreasing value.
struct FloorBlock {
    std::uint64_t value;
    std::uint64_t n_lo;
    std::uint64_t n_hi;
    friend bool operator==(const FloorBlock&, const FloorBlock&) = default;
};

// Visit the blocks of x in increasing n (decreasing value).  Safe for any
// x >= 1 including near UINT64_MAX.
template <class Fn>
void for_each_block(std::uint64_t x, Fn&& fn) {
    if (x == 0) throw std::invalid_argument("for_each_block: x must be >= 1");
    std::uint64_t n = 1;
    for (;;) {
        const std::uint64_t v = x / n;
        const std::uint64_t hi = x / v;
        fn(FloorBlock{v, n, hi});
        if (hi >= x) break;
        n = hi + 1;
    }
}

inline std::vector<FloorBlock> blocks(std::uint64_t x) {
    std::vector<FloorBlock> out;
    for_each_block(x, [&](const FloorBlock& b) { out.push_back(b); });
    return out;
}

// The distinct quotients of x in increasing order.
inline std::vector<std::uint64_t> distinct_quotients(std::uint64_t x) {
    std::vector<std::uint64_t> vals;
    for_each_block(x, [&](const FloorBlock& b) { vals.push_back(b.value); });
    std::reverse(vals.begin(), vals.end());
    return vals;
}

// |{ floor(x/n) : 1 <= n <= x }|, i.e. the number of blocks.
inline std::uint64_t distinct_quotient_count(std::uint64_t x) {
    std::uint64_t c = 0;
    for_each_block(x, [&](const FloorBlock&) { ++c; });
    return c;
}

namespace detail {
inline bool prime_lookup(std::uint64_t v, const PrimeSieve* sieve) {
    return (sieve && v <= sieve->limit()) ? sieve->is_prime(v) : is_prime(v);
}
}  // namespace detail

// Number of primes among the distinct quotients of x.
inline std::uint64_t prime_value_count(std::uint64_t x, const PrimeSieve* sieve = nullptr) {
    std::uint64_t c = 0;
    for_each_block(x, [&](const FloorBlock& b) {
        if (detail::prime_lookup(b.value, sieve)) ++c;
    });
    return c;
}

// Number of n in [1, x] whose quotient floor(x/n) is prime: the sum of block
// widths over prime-valued blocks.
inline std::uint64_t prime_index_count(std::uint64_t x, const PrimeSieve* sieve = nullptr) {
    std::uint64_t c = 0;
    for_each_block(x, [&](const FloorBlock& b) {
        if (detail::prime_lookup(b.value, sieve)) c += b.n_hi - b.n_lo + 1;
    });
    return c;
}

// Number of n in [1, x] whose quotient is a prime power p^k, k >= 1.
inline std::uint64_t prime_power_index_count(std::uint64_t x, const PrimeSieve* sieve = nullptr) {
    std::uint64_t c = 0;
    for_each_block(x, [&](const FloorBlock& b) {
        if (is_prime_power(b.value, sieve)) c += b.n_hi - b.n_lo + 1;
    });
    return c;
}

// Saturation threshold: the unique positive b with b(b+1) = x when x is a
// promic number, in general b = max{ b : b(b+1) <= x }.  Every prime p <= b
// occurs among the quotients of x; above b, occurrence is decided by the
// one-step difference floor(x/p) - floor(x/(p+1)).  The floor is computed
// purely in integers; the real value (sqrt(4x+1)-1)/2 is attached for
// display only.
struct SaturationThreshold {
    long double value;
    std::uint64_t floor;
};

inline SaturationThreshold saturation_threshold(std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("saturation_threshold: x must be >= 1");
    std::uint64_t b = isqrt(x);
    auto fits = [&](std::uint64_t t) {
        return t <= UINT64_MAX / (t + 1) ? t * (t + 1) <= x
                                         : false;  // t(t+1) overflows => certainly > x
    };
    while (b > 0 && !fits(b)) --b;
    while (fits(b + 1)) ++b;
    const long double real = (sqrtl(4.0L * static_cast<long double>(x) + 1.0L) - 1.0L) / 2.0L;
    return SaturationThreshold{real, b};
}

// Everything the CLI reports for one x, computed in a single block pass.
struct FloorSetSummary {
    std::uint64_t x;
    std::uint64_t distinct_count;
    std::uint64_t prime_value_count;
    std::uint64_t prime_index_count;
    std::uint64_t prime_power_index_count;
};

inline FloorSetSummary summarize(std::uint64_t x, const PrimeSieve* sieve = nullptr) {
    FloorSetSummary s{x, 0, 0, 0, 0};
    for_each_block(x, [&](const FloorBlock& b) {
        ++s.distinct_count;
        const std::uint64_t width = b.n_hi - b.n_lo + 1;
        if (detail::prime_lookup(b.value, sieve)) {
            ++s.prime_value_count;
            s.prime_index_count += width;
            s.prime_power_index_count += width;
        } else if (is_prime_power(b.value, sieve)) {
            s.prime_power_index_count += width;
        }
    });
    return s;
}

// Prime powers p^k <= limit marked in a bit table.  Built by enumerating
// powers of sieve primes, deliberately avoiding the root-extraction route
// used by is_prime_power so the two stay independent checks.
class PrimePowerTable {
  public:
    explicit PrimePowerTable(const PrimeSieve& sieve) : limit_(sieve.limit()), bits_((limit_ + 64) / 64, 0) {
        sieve.for_each_prime([&](std::uint64_t p) {
            for (std::uint64_t m = p;;) {
                bits_[m / 64] |= std::uint64_t{1} << (m % 64);
                if (m > limit_ / p) break;
                m *= p;
            }
        });
    }

    std::uint64_t limit() const { return limit_; }

    bool contains(std::uint64_t n) const {
        if (n > limit_) throw std::out_of_range("PrimePowerTable: query above table limit");
        return (bits_[n / 64] >> (n % 64)) & 1;
    }

  private:
    std::uint64_t limit_;
    std::vector<std::uint64_t> bits_;
};

namespace detail {
inline void check_oracle_ceiling(std::uint64_t x, std::uint64_t ceiling, const char* fn) {
    if (x == 0) throw std::invalid_argument(std::string(fn) + ": x must be >= 1");
    if (x > ceiling)
        throw std::domain_error(std::string(fn) + ": x exceeds the brute-force ceiling");
}
}  // namespace detail

// Literal n = 1..x walk collecting the distinct quotients.  The quotient
// sequence is non-increasing, so "new value" means "differs from the
// previous n"; no block arithmetic is involved.
inline std::vector<std::uint64_t> distinct_quotients_brute(std::uint64_t x,
                                                           std::uint64_t ceiling = kDefaultOracleCeiling) {
    detail::check_oracle_ceiling(x, ceiling, "distinct_quotients_brute");
    std::vector<std::uint64_t> vals;
    std::uint64_t prev = 0;
    for (std::uint64_t n = x; n >= 1; --n) {  // ascending quotients
        const std::uint64_t v = x / n;
        if (v != prev) {
            vals.push_back(v);
            prev = v;
        }
    }
    return vals;
}

// Brute-force twin of prime_value_count: walk every n, test each fresh
// quotient against a sieve table (not Miller-Rabin).
inline std::uint64_t prime_value_count_brute(std::uint64_t x,
                                             std::uint64_t ceiling = kDefaultOracleCeiling,
                                             const PrimeSieve* sieve = nullptr) {
    detail::check_oracle_ceiling(x, ceiling, "prime_value_count_brute");
    PrimeSieve local(sieve ? 1 : x > 1 ? x : 2);
    const PrimeSieve& table = sieve ? *sieve : local;
    if (table.limit() < x) throw std::invalid_argument("prime_value_count_brute: sieve too small");
    std::uint64_t c = 0, prev = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        const std::uint64_t v = x / n;
        if (v != prev && table.is_prime(v)) ++c;
        prev = v;
    }
    return c;
}

// Brute-force twin of prime_index_count: one sieve lookup per n.
inline std::uint64_t prime_index_count_brute(std::uint64_t x,
                                             std::uint64_t ceiling = kDefaultOracleCeiling,
                                             const PrimeSieve* sieve = nullptr) {
    detail::check_oracle_ceiling(x, ceiling, "prime_index_count_brute");
    PrimeSieve local(sieve ? 1 : x > 1 ? x : 2);
    const PrimeSieve& table = sieve ? *sieve : local;
    if (table.limit() < x) throw std::invalid_argument("prime_index_count_brute: sieve too small");
    std::uint64_t c = 0;
    for (std::uint64_t n = 1; n <= x; ++n)
        if (table.is_prime(x / n)) ++c;
    return c;
}

// Brute-force twin of prime_power_index_count: one table lookup per n,
// against the power-enumeration table rather than root extraction.
inline std::uint64_t prime_power_index_count_brute(std::uint64_t x,
                                                   std::uint64_t ceiling = kDefaultOracleCeiling,
                                                   const PrimePowerTable* table = nullptr) {
    detail::check_oracle_ceiling(x, ceiling, "prime_power_index_count_brute");
    if (table && table->limit() < x)
        throw std::invalid_argument("prime_power_index_count_brute: table too small");
    std::uint64_t c = 0;
    if (table) {
        for (std::uint64_t n = 1; n <= x; ++n)
            if (table->contains(x / n)) ++c;
    } else {
        PrimePowerTable local{PrimeSieve(x > 1 ? x : 2)};
        for (std::uint64_t n = 1; n <= x; ++n)
            if (local.contains(x / n)) ++c;
    }
    return c;
}

// prime_value_count by a different criterion: a prime p occurs among the
// quotients of x iff floor(x/p) - floor(x/(p+1)) > 0.  Requires primes up
// to x, hence the oracle ceiling; used to cross-check the block route.
inline std::uint64_t prime_value_count_delta(std::uint64_t x,
                                             std::uint64_t ceiling = kDefaultOracleCeiling,
                                             const PrimeSieve* sieve = nullptr) {
    detail::check_oracle_ceiling(x, ceiling, "prime_value_count_delta");
    PrimeSieve local(sieve ? 1 : x > 1 ? x : 2);
    const PrimeSieve& table = sieve ? *sieve : local;
    if (table.limit() < x) throw std::invalid_argument("prime_value_count_delta: sieve too small");
    std::uint64_t c = 0;
    table.for_each_prime(2, x, [&](std::uint64_t p) {
        if (x / p - x / (p + 1) > 0) ++c;
    });
    return c;
}

}  // namespace floorprimes
