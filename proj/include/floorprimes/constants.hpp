#pragma once

// The two limiting densities attached to the floor quotient set:
//
//   P = sum over primes p of 1/(p(p+1))          ~ 0.330230
//   D = sum over prime powers q of 1/(q(q+1))    ~ 0.41382
//
// Both are computed two independent ways: an Euler-product style series
// over the prime zeta function, and a direct partial sum over an enumerated
// prime (or prime power) list, which brackets the constant from below.
//
// Series route.  Expanding 1/(p(p+1)) = sum_{s>=2} (-1)^s p^{-s} and
// swapping sums gives P = sum_{s>=2} (-1)^s P(s) with P the prime zeta
// function, and likewise D with P(s) replaced by sum_{k>=1} P(ks).  P(s)
// itself comes from the Moebius inversion P(s) = sum_n mu(n)/n log zeta(ns).
//
// Error accounting.  Every estimate carries an error_bound collecting the
// truncation structure introduced at its own level (series depth tails,
// prime-sum tails, bracket widths), assuming the underlying real
// evaluations are exact to working precision.  Working precision is long
// double (x86 extended); zeta itself is good to ~1e-16 relative, which is
// the floor under every bound below.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "floorset.hpp"
#include "primal.hpp"

namespace floorprimes {

namespace detail {

struct Bounded {
    long double value;
    long double bound;  // truncation error bound, nonnegative
};

// zeta(s) - 1 by direct summation of n^-s for n = 2..100000 with a
// midpoint-rule integral tail (n0 + 1/2)^(1-s)/(s-1).  The Euler-Maclaurin
// midpoint error gives the rigorous truncation bound s/24 (n0-1/2)^(-s-1),
// which is 8.3e-17 at s = 2 and falls off rapidly.  Kahan compensation
// keeps the accumulation error an order below that.
inline Bounded zeta_minus_one(long double s) {
    constexpr long double kCap = 100'000.0L;
    long double sum = 0.0L, comp = 0.0L;
    long double n = 2.0L;
    for (; n <= kCap; n += 1.0L) {
        const long double t = powl(n, -s);
        const long double y = t - comp;
        const long double u = sum + y;
        comp = (u - sum) - y;
        sum = u;
        if (t < sum * 1e-24L) {
            n += 1.0L;
            break;
        }
    }
    const long double n0 = n - 1.0L;  // last summed index
    const long double tail = powl(n0 + 0.5L, 1.0L - s) / (s - 1.0L);
    const long double bound = s / 24.0L * powl(n0 - 0.5L, -s - 1.0L);
    return {sum + tail, bound};
}

// log zeta(s) = log1p(zeta(s) - 1), with the bound pushed through the
// derivative of log.
inline Bounded log_zeta(long double s) {
    const Bounded z = zeta_minus_one(s);
    return {log1pl(z.value), z.bound / (1.0L + z.value)};
}

// Prime zeta P(s) = sum_n mu(n)/n log zeta(ns).  The n = 1 term is always
// included; from n = 2 on the series is truncated at the first term with
// |log zeta(ns)| < 1e-18, which must come since log zeta(t) < 2^(1-t).
// The skipped terms are covered by sum_{n>=n0} 2^(1-ns)/n <= 4/3 2^(1-n0 s).
inline Bounded prime_zeta(long double s) {
    long double acc = 0.0L, bound = 0.0L;
    std::uint64_t n = 1;
    for (;;) {
        const int mu = mobius(n);
        if (mu != 0) {
            const Bounded l = log_zeta(static_cast<long double>(n) * s);
            if (n >= 2 && fabsl(l.value) < 1e-18L) {
                bound += 4.0L / 3.0L * exp2l(1.0L - static_cast<long double>(n) * s);
                break;
            }
            acc += static_cast<long double>(mu) / static_cast<long double>(n) * l.value;
            bound += l.bound / static_cast<long double>(n);
        }
        ++n;
        if (static_cast<long double>(n) * s > 20000.0L) break;  // unreachable backstop
    }
    return {acc, bound};
}

}  // namespace detail

// Riemann zeta on [2, inf).
inline long double zeta(long double s) {
    if (!(s >= 2.0L)) throw std::invalid_argument("zeta: require s >= 2");
    return 1.0L + detail::zeta_minus_one(s).value;
}

// Prime zeta P(s) = sum over primes p of p^-s, for s >= 2.
inline long double prime_zeta(long double s) {
    if (!(s >= 2.0L)) throw std::invalid_argument("prime_zeta: require s >= 2");
    return detail::prime_zeta(s).value;
}

enum class EstimateMethod { series, direct_bracket };

inline const char* to_string(EstimateMethod m) {
    return m == EstimateMethod::series ? "series" : "direct_bracket";
}

// A constant estimate with a one-sided or symmetric rigorous truncation
// bound.  For method == series: |true - value| <= error_bound.  For
// method == direct_bracket: value <= true <= value + error_bound.
struct ConstantEstimate {
    long double value;
    long double error_bound;
    EstimateMethod method;
    unsigned depth;            // series truncation depth (0 if n/a)
    std::uint64_t prime_limit;  // direct enumeration limit (0 if n/a)
};

// P = sum_{s=2..depth} (-1)^s P(s); the dropped tail is below
// sum_{s>depth} P(s) <= sum_{s>depth} 2^(1-s) = 2^(1-depth), and that tail
// is the whole error_bound: the P(s) evaluations themselves count as exact
// to working precision under the error-accounting model above.
inline ConstantEstimate constant_P_series(unsigned depth = 64) {
    if (depth < 2) throw std::invalid_argument("constant_P_series: depth must be >= 2");
    long double acc = 0.0L;
    for (unsigned s = 2; s <= depth; ++s) {
        const detail::Bounded p = detail::prime_zeta(static_cast<long double>(s));
        acc += (s % 2 == 0 ? p.value : -p.value);
    }
    const long double bound = exp2l(1.0L - static_cast<long double>(depth));
    return {acc, bound, EstimateMethod::series, depth, 0};
}

// Direct partial sum of 1/(p(p+1)) over primes p <= prime_limit, ascending,
// so the value increases toward P.  The dropped tail is at most
// sum_{m > prime_limit} 1/(m(m+1)) = 1/(prime_limit + 1).
inline ConstantEstimate constant_P_direct(std::uint64_t prime_limit) {
    if (prime_limit < 2) throw std::invalid_argument("constant_P_direct: prime_limit must be >= 2");
    PrimeSieve sieve(prime_limit);
    long double acc = 0.0L, comp = 0.0L;
    sieve.for_each_prime([&](std::uint64_t p) {
        const long double pl = static_cast<long double>(p);
        const long double t = 1.0L / (pl * (pl + 1.0L));
        const long double y = t - comp;
        const long double u = acc + y;
        comp = (u - acc) - y;
        acc = u;
    });
    const long double bound = 1.0L / (static_cast<long double>(prime_limit) + 1.0L);
    return {acc, bound, EstimateMethod::direct_bracket, 0, prime_limit};
}

// D = sum_{s=2..depth} (-1)^s sum_{k>=1} P(ks).  The inner sum keeps k = 1
// unconditionally and truncates once P(ks) < 1e-18 (its own tail is below
// 4/3 2^(1-(k+1)s)).  The outer tail obeys sum_{s>depth} sum_k P(ks)
// = sum_{s>depth} sum_{prime powers q} q^-s <= 2^-d + 3^-d/2 + 5/3 4^-d
// < 2^(1-depth) for depth >= 2.  error_bound carries both truncation
// tails (inner k cutoffs and the outer depth tail); the P(ks) evaluations
// count as exact to working precision.
inline ConstantEstimate constant_D_series(unsigned depth = 64) {
    if (depth < 2) throw std::invalid_argument("constant_D_series: depth must be >= 2");
    long double acc = 0.0L, bound = 0.0L;
    for (unsigned s = 2; s <= depth; ++s) {
        long double inner = 0.0L;
        for (unsigned k = 1;; ++k) {
            const long double ks = static_cast<long double>(k) * s;
            if (ks > 64.5L) {  // P(ks) < 2^(1-ks) < 1e-18 certainly
                bound += 4.0L / 3.0L * exp2l(1.0L - ks);
                break;
            }
            const detail::Bounded p = detail::prime_zeta(ks);
            if (k >= 2 && p.value < 1e-18L) {
                inner += p.value;
                bound += 4.0L / 3.0L * exp2l(1.0L - ks - s);
                break;
            }
            inner += p.value;
        }
        acc += (s % 2 == 0 ? inner : -inner);
    }
    bound += exp2l(1.0L - static_cast<long double>(depth));
    return {acc, bound, EstimateMethod::series, depth, 0};
}

inline ConstantEstimate constant_D(unsigned depth = 64) { return constant_D_series(depth); }

// Direct partial sum of 1/(q(q+1)) over prime powers q <= limit, ascending.
// Tail bound as for constant_P_direct.
inline ConstantEstimate constant_D_direct(std::uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("constant_D_direct: limit must be >= 2");
    PrimeSieve sieve(limit);
    std::vector<std::uint64_t> powers;
    sieve.for_each_prime([&](std::uint64_t p) {
        for (std::uint64_t m = p;;) {
            powers.push_back(m);
            if (m > limit / p) break;
            m *= p;
        }
    });
    std::sort(powers.begin(), powers.end());
    long double acc = 0.0L, comp = 0.0L;
    for (std::uint64_t q : powers) {
        const long double ql = static_cast<long double>(q);
        const long double t = 1.0L / (ql * (ql + 1.0L));
        const long double y = t - comp;
        const long double u = acc + y;
        comp = (u - acc) - y;
        acc = u;
    }
    const long double bound = 1.0L / (static_cast<long double>(limit) + 1.0L);
    return {acc, bound, EstimateMethod::direct_bracket, 0, limit};
}

}  // namespace floorprimes
