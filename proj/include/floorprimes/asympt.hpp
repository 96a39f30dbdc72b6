#pragma once

// Normalized-residual diagnostics for the three counting functions:
//
//   G(x)   ~ 4 sqrt(x)/log x        residual scaled by (log x)^2/sqrt(x)
//   F(x)   ~ P x + O(sqrt x)        residual scaled by 1/sqrt(x)
//   Fpp(x) ~ D x + O(sqrt x)        residual scaled by 1/sqrt(x)
//
// The scaled residual should stay bounded if the claimed error order is
// right; the soft bounds below (2 for the F-type rows, 10 for the G row)
// are pilot-run acceptance thresholds, not claims.  Exceeding one is a
// reportable finding, never an assertion failure.  The constants P and D
// are always recomputed from the constants module, never embedded as
// literals, so there is a single source of truth for them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "constants.hpp"
#include "floorset.hpp"

namespace floorprimes {

enum class ResidualRule { gx, fx, fpp };

inline const char* to_string(ResidualRule r) {
    switch (r) {
        case ResidualRule::gx: return "gx";
        case ResidualRule::fx: return "fx";
        case ResidualRule::fpp: return "fpp";
    }
    return "gx";
}

struct AsymptoticSample {
    std::uint64_t x;
    std::uint64_t exact;
    long double main_term;
    long double residual;    // exact - main_term
    long double normalized;  // residual scaled per the rule's error order
    ResidualRule rule;
};

inline constexpr long double kSoftBoundFNormalized = 2.0L;
inline constexpr long double kSoftBoundGNormalized = 10.0L;

inline long double soft_bound(ResidualRule r) {
    return r == ResidualRule::gx ? kSoftBoundGNormalized : kSoftBoundFNormalized;
}

inline bool exceeds_soft_bound(const AsymptoticSample& s) {
    return fabsl(s.normalized) > soft_bound(s.rule);
}

namespace detail {

inline const ConstantEstimate& cached_P() {
    static const ConstantEstimate e = constant_P_series(64);
    return e;
}

inline const ConstantEstimate& cached_D() {
    static const ConstantEstimate e = constant_D_series(64);
    return e;
}

}  // namespace detail

// G(x) against 4 sqrt(x)/log x; rejects x < 2 where log x vanishes.
inline std::vector<AsymptoticSample> gx_report(const std::vector<std::uint64_t>& points,
                                               const PrimeSieve* sieve = nullptr) {
    std::vector<AsymptoticSample> out;
    out.reserve(points.size());
    for (std::uint64_t x : points) {
        if (x < 2) throw std::invalid_argument("gx_report: require x >= 2");
        const std::uint64_t exact = prime_value_count(x, sieve);
        const long double xl = static_cast<long double>(x);
        const long double lx = logl(xl), sq = sqrtl(xl);
        const long double main = 4.0L * sq / lx;
        const long double res = static_cast<long double>(exact) - main;
        out.push_back({x, exact, main, res, res * lx * lx / sq, ResidualRule::gx});
    }
    return out;
}

// F(x) against P x.
inline std::vector<AsymptoticSample> fx_report(const std::vector<std::uint64_t>& points,
                                               const PrimeSieve* sieve = nullptr) {
    const long double P = detail::cached_P().value;
    std::vector<AsymptoticSample> out;
    out.reserve(points.size());
    for (std::uint64_t x : points) {
        if (x < 1) throw std::invalid_argument("fx_report: require x >= 1");
        const std::uint64_t exact = prime_index_count(x, sieve);
        const long double xl = static_cast<long double>(x);
        const long double main = P * xl;
        const long double res = static_cast<long double>(exact) - main;
        out.push_back({x, exact, main, res, res / sqrtl(xl), ResidualRule::fx});
    }
    return out;
}

// Prime-power analogue: Fpp(x) against D x.
inline std::vector<AsymptoticSample> fx_primepower_report(const std::vector<std::uint64_t>& points,
                                                          const PrimeSieve* sieve = nullptr) {
    const long double D = detail::cached_D().value;
    std::vector<AsymptoticSample> out;
    out.reserve(points.size());
    for (std::uint64_t x : points) {
        if (x < 1) throw std::invalid_argument("fx_primepower_report: require x >= 1");
        const std::uint64_t exact = prime_power_index_count(x, sieve);
        const long double xl = static_cast<long double>(x);
        const long double main = D * xl;
        const long double res = static_cast<long double>(exact) - main;
        out.push_back({x, exact, main, res, res / sqrtl(xl), ResidualRule::fpp});
    }
    return out;
}

// Empirical constants for the two-sided envelope
//   P x - A1 sqrt(x)/log x  <=  F(x)  <=  P x + A2 sqrt(x).
// Fitted as the smallest constants covering the given points:
//   A2_emp = max over points of max(0, (F(x) - P x)/sqrt(x))
//   A1_emp = max over points of max(0, (P x - F(x)) log(x)/sqrt(x))
struct Theorem5Bounds {
    long double a1_emp;
    long double a2_emp;
};

inline Theorem5Bounds theorem5_bounds(const std::vector<std::uint64_t>& points,
                                      const PrimeSieve* sieve = nullptr) {
    if (points.empty()) throw std::invalid_argument("theorem5_bounds: need at least one point");
    const long double P = detail::cached_P().value;
    long double a1 = 0.0L, a2 = 0.0L;
    for (std::uint64_t x : points) {
        if (x < 2) throw std::invalid_argument("theorem5_bounds: require x >= 2");
        const long double xl = static_cast<long double>(x);
        const long double F = static_cast<long double>(prime_index_count(x, sieve));
        const long double sq = sqrtl(xl);
        a2 = std::max(a2, (F - P * xl) / sq);
        a1 = std::max(a1, (P * xl - F) * logl(xl) / sq);
    }
    return {std::max(0.0L, a1), std::max(0.0L, a2)};
}

}  // namespace floorprimes
