#pragma once

// Prime infrastructure shared by the floor-set counting routines: an
// Eratosthenes bit table, deterministic 64-bit Miller-Rabin, prime-power
// detection, the Moebius function and full factorization.
//
// Everything here is exact over the whole uint64_t range. Primality never
// falls back to a probabilistic answer.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace floorprimes {

namespace detail {
using u128 = unsigned __int128;
}

// floor(sqrt(n)), integer Newton iteration; no floating point involved.
inline std::uint64_t isqrt(std::uint64_t n) {
    if (n < 2) return n;
    // seed 2^ceil(w/2) >= sqrt(n); the iteration decreases monotonically
    std::uint64_t x = std::uint64_t(1) << ((std::bit_width(n) + 1) / 2);
    std::uint64_t y = (x + n / x) / 2;
    while (y < x) {
        x = y;
        y = (x + n / x) / 2;
    }
    return x;
}

// base^exp if it fits in 64 bits
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp) {
    detail::u128 acc = 1;
    for (unsigned i = 0; i < exp; ++i) {
        acc *= base;
        if (acc > UINT64_MAX) return std::nullopt;
    }
    return static_cast<std::uint64_t>(acc);
}

// floor(n^(1/k)); k >= 1
inline std::uint64_t iroot(std::uint64_t n, unsigned k) {
    if (k == 0) throw std::invalid_argument("iroot: k must be >= 1");
    if (k == 1 || n < 2) return n;
    if (k >= 64) return 1;
    auto fits = [&](std::uint64_t r) {
        auto p = checked_pow(r, k);
        return p && *p <= n;
    };
    std::uint64_t r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
    while (r > 0 && !fits(r)) --r;
    while (fits(r + 1)) ++r;
    return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<detail::u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = m > 1 ? 1 % m : 0;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, exact for every 64-bit input.  The witness set
// {2, 325, 9375, 28178, 450775, 9780504, 1795265022} has no strong
// pseudoprime below 2^64.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 41 * 41) return true;
    std::uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        a %= n;
        if (a == 0) continue;
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

inline constexpr std::uint64_t kDefaultSieveCeiling = 1'000'000'000;

// Bit-packed primality table over [0, limit], odd numbers only internally.
// Immutable after construction; safe to share across threads.
class PrimeSieve {
  public:
    explicit PrimeSieve(std::uint64_t limit, std::uint64_t memory_ceiling = kDefaultSieveCeiling)
        : limit_(limit) {
        if (limit == 0) throw std::invalid_argument("PrimeSieve: limit must be >= 1");
        if (limit > memory_ceiling)
            throw std::domain_error("PrimeSieve: limit exceeds the configured memory ceiling");
        const std::uint64_t odds = limit / 2 + 1;  // index i <-> odd 2i+1
        bits_.assign((odds + 63) / 64, ~std::uint64_t{0});
        clear_bit(0);  // 1 is not prime
        for (std::uint64_t p = 3; p * p <= limit; p += 2) {
            if (!test_bit(p >> 1)) continue;
            for (std::uint64_t q = p * p; q <= limit; q += 2 * p) clear_bit(q >> 1);
        }
        // mask bits past limit so popcounts stay exact
        const std::uint64_t used = (limit + 1) / 2;  // number of odds <= limit (for limit>=1)
        if (used % 64 != 0) bits_.back() &= (std::uint64_t{1} << (used % 64)) - 1;
        if (used / 64 < bits_.size() && used % 64 == 0) bits_.back() = 0;
    }

    std::uint64_t limit() const { return limit_; }

    bool is_prime(std::uint64_t n) const {
        if (n > limit_) throw std::out_of_range("PrimeSieve: query above table limit");
        if (n == 2) return true;
        if (n < 2 || n % 2 == 0) return false;
        return test_bit(n >> 1);
    }

    // pi(min(hi, limit))
    std::uint64_t count_primes(std::uint64_t hi) const {
        hi = std::min(hi, limit_);
        if (hi < 2) return 0;
        if (hi == 2) return 1;
        const std::uint64_t nodds = (hi + 1) / 2;  // odds <= hi
        std::uint64_t c = 1;                     // the prime 2
        std::uint64_t full = nodds / 64;
        for (std::uint64_t w = 0; w < full; ++w) c += std::popcount(bits_[w]);
        if (nodds % 64 != 0)
            c += std::popcount(bits_[full] & ((std::uint64_t{1} << (nodds % 64)) - 1));
        return c;
    }

    std::uint64_t count_primes() const { return count_primes(limit_); }

    template <class Fn>
    void for_each_prime(Fn&& fn) const {
        for_each_prime(2, limit_, fn);
    }

    template <class Fn>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        hi = std::min(hi, limit_);
        if (lo <= 2 && hi >= 2) fn(std::uint64_t{2});
        std::uint64_t p = std::max<std::uint64_t>(lo | 1, 3);
        for (; p <= hi; p += 2)
            if (test_bit(p >> 1)) fn(p);
    }

    std::vector<std::uint64_t> primes() const {
        std::vector<std::uint64_t> out;
        for_each_prime([&](std::uint64_t p) { out.push_back(p); });
        return out;
    }

  private:
    bool test_bit(std::uint64_t i) const { return (bits_[i / 64] >> (i % 64)) & 1; }
    void clear_bit(std::uint64_t i) { bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

    std::uint64_t limit_;
    std::vector<std::uint64_t> bits_;
};

inline PrimeSieve sieve_primes(std::uint64_t limit, std::uint64_t memory_ceiling = kDefaultSieveCeiling) {
    return PrimeSieve(limit, memory_ceiling);
}

// pi(limit) without holding a full table: segmented count over odd numbers.
inline std::uint64_t prime_count(std::uint64_t limit) {
    if (limit < 2) return 0;
    if (limit == 2) return 1;
    const std::uint64_t root = isqrt(limit);
    std::vector<std::uint64_t> base;
    if (root >= 3) {
        PrimeSieve bs(root);
        bs.for_each_prime(3, root, [&](std::uint64_t p) { base.push_back(p); });
    }
    std::uint64_t count = 1;  // the prime 2
    constexpr std::uint64_t kSegOdds = std::uint64_t{1} << 20;
    std::vector<std::uint64_t> seg(kSegOdds / 64);
    // odds in [3, limit], index within segment: odd = seg_lo + 2*i
    for (std::uint64_t seg_lo = 3; seg_lo <= limit; seg_lo += 2 * kSegOdds) {
        const std::uint64_t seg_hi = std::min(limit, seg_lo + 2 * (kSegOdds - 1));
        const std::uint64_t n = (seg_hi - seg_lo) / 2 + 1;
        std::fill(seg.begin(), seg.end(), ~std::uint64_t{0});
        for (std::uint64_t p : base) {
            std::uint64_t start = std::max(p * p, ((seg_lo + p - 1) / p) * p);
            if (start % 2 == 0) start += p;
            for (std::uint64_t q = start; q <= seg_hi; q += 2 * p) seg[(q - seg_lo) / 2 / 64] &= ~(std::uint64_t{1} << ((q - seg_lo) / 2 % 64));
        }
        std::uint64_t full = n / 64;
        for (std::uint64_t w = 0; w < full; ++w) count += std::popcount(seg[w]);
        if (n % 64 != 0) count += std::popcount(seg[full] & ((std::uint64_t{1} << (n % 64)) - 1));
    }
    return count;
}

struct PrimeFactor {
    std::uint64_t prime;
    unsigned exponent;
    friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

namespace detail {

inline const std::vector<std::uint64_t>& small_primes() {
    static const std::vector<std::uint64_t> table = PrimeSieve(1 << 16).primes();
    return table;
}

// Brent-cycle Pollard rho with deterministic polynomial offsets.
// n must be odd, composite and > 1.
inline std::uint64_t pollard_brent(std::uint64_t n) {
    for (std::uint64_t c = 1;; ++c) {
        auto step = [&](std::uint64_t v) {
            std::uint64_t s = mulmod(v, v, n) + c;
            return s >= n ? s - n : s;
        };
        std::uint64_t y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = step(y);
            for (std::uint64_t k = 0; k < r && g == 1; k += 128) {
                ys = y;
                const std::uint64_t m = std::min<std::uint64_t>(128, r - k);
                for (std::uint64_t i = 0; i < m; ++i) {
                    y = step(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r *= 2;
        }
        if (g == n) {
            // batch overshot the factor; replay one step at a time
            g = 1;
            while (g == 1) {
                ys = step(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

inline void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace detail

// Prime factorization with strictly increasing primes; product reconstructs n.
inline std::vector<PrimeFactor> factorize(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
    std::vector<PrimeFactor> out;
    for (std::uint64_t p : detail::small_primes()) {
        if (p * p > n) break;
        if (n % p == 0) {
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.push_back({p, e});
        }
    }
    if (n > 1) {
        if (is_prime(n)) {
            out.push_back({n, 1});
        } else {
            std::vector<std::uint64_t> rest;
            detail::factor_into(n, rest);
            std::sort(rest.begin(), rest.end());
            for (std::size_t i = 0; i < rest.size();) {
                std::size_t j = i;
                while (j < rest.size() && rest[j] == rest[i]) ++j;
                out.push_back({rest[i], static_cast<unsigned>(j - i)});
                i = j;
            }
        }
    }
    return out;
}

// Moebius function: 0 on squareful n, else (-1)^(number of prime factors).
inline int mobius(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("mobius: n must be >= 1");
    if (n == 1) return 1;
    auto fs = factorize(n);
    for (const auto& f : fs)
        if (f.exponent >= 2) return 0;
    return fs.size() % 2 == 0 ? 1 : -1;
}

// True iff n = p^k for a prime p and k >= 1.  1 is not a prime power.
// An optional sieve accelerates the primality lookups below its limit.
inline bool is_prime_power(std::uint64_t n, const PrimeSieve* sieve = nullptr) {
    auto probably = [&](std::uint64_t v) {
        return (sieve && v <= sieve->limit()) ? sieve->is_prime(v) : is_prime(v);
    };
    if (n < 2) return false;
    if (probably(n)) return true;
    for (unsigned k = 2; k < std::uint64_t(std::bit_width(n)); ++k) {
        std::uint64_t r = iroot(n, k);
        if (r < 2) break;
        auto p = checked_pow(r, k);
        if (p && *p == n && probably(r)) return true;
    }
    return false;
}

}  // namespace floorprimes
