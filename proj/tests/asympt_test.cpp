#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "floorprimes/asympt.hpp"

using namespace floorprimes;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct NormRow {
    std::uint64_t x;
    double gnorm;
    double fnorm;
    double fppnorm;
};

// Frozen normalized residuals (6 decimal places, independent precomputation).
constexpr NormRow kNorm[] = {
    {10, -4.180518, 0.220632, -0.043700},
    {100, -7.816885, -0.102299, -0.038193},
    {1'000, -1.978928, -0.070516, -0.025908},
    {10'000, -3.757517, -0.092993, -0.041929},
    {100'000, -3.717365, -0.034762, -0.015587},
    {1'000'000, -2.391514, -0.011926, -0.004290},
    {100'000'000, -0.117826, -0.007963, -0.007495},
};

}  // namespace

TEST_CASE("fx report at x = 10") {
    const auto rows = fx_report({10});
    REQUIRE(rows.size() == 1);
    const AsymptoticSample& s = rows[0];
    REQUIRE(s.x == 10);
    REQUIRE(s.exact == 4);
    REQUIRE(s.rule == ResidualRule::fx);
    REQUIRE_THAT((double)s.main_term, WithinAbs(3.302299262642, 1e-11));
    REQUIRE_THAT((double)s.residual, WithinAbs(0.697700737358, 1e-11));
    REQUIRE_THAT((double)s.normalized, WithinAbs(0.220632, 1e-6));
    REQUIRE_FALSE(exceeds_soft_bound(s));
}

TEST_CASE("report fields are internally consistent") {
    for (const auto& s : gx_report({2, 10, 1'000})) {
        REQUIRE_THAT((double)(s.exact - s.main_term), WithinAbs((double)s.residual, 1e-9));
    }
    const auto f1 = fx_report({1});
    REQUIRE(f1[0].exact == 0);
    REQUIRE_THAT((double)f1[0].normalized, WithinAbs(-0.330230, 1e-6));
}

TEST_CASE("normalized residual grid matches the frozen table") {
    std::vector<std::uint64_t> xs;
    for (const NormRow& r : kNorm) xs.push_back(r.x);
    const auto g = gx_report(xs);
    const auto f = fx_report(xs);
    const auto fpp = fx_primepower_report(xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        INFO("x = " << xs[i]);
        REQUIRE_THAT((double)g[i].normalized, WithinAbs(kNorm[i].gnorm, 5e-6));
        REQUIRE_THAT((double)f[i].normalized, WithinAbs(kNorm[i].fnorm, 5e-6));
        REQUIRE_THAT((double)fpp[i].normalized, WithinAbs(kNorm[i].fppnorm, 5e-6));
        REQUIRE_FALSE(exceeds_soft_bound(g[i]));
        REQUIRE_FALSE(exceeds_soft_bound(f[i]));
        REQUIRE_FALSE(exceeds_soft_bound(fpp[i]));
    }
}

TEST_CASE("main terms come from the constants module") {
    REQUIRE_THAT((double)fx_report({1'000})[0].main_term,
                 WithinRel(330.2299262642032, 1e-14));
    REQUIRE_THAT((double)fx_primepower_report({1'000})[0].main_term,
                 WithinRel(413.8192895187781, 1e-14));
}

TEST_CASE("domain guards") {
    REQUIRE_THROWS_AS(gx_report({1}), std::invalid_argument);
    REQUIRE_THROWS_AS(gx_report({10, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(fx_report({0}), std::invalid_argument);
    REQUIRE_THROWS_AS(theorem5_bounds({}), std::invalid_argument);
    REQUIRE_THROWS_AS(theorem5_bounds({1}), std::invalid_argument);
    REQUIRE_NOTHROW(gx_report({2}));
}

TEST_CASE("soft bound classification") {
    REQUIRE(soft_bound(ResidualRule::gx) == 10.0L);
    REQUIRE(soft_bound(ResidualRule::fx) == 2.0L);
    REQUIRE(soft_bound(ResidualRule::fpp) == 2.0L);
    AsymptoticSample s{100, 0, 0.0L, 0.0L, 2.5L, ResidualRule::fx};
    REQUIRE(exceeds_soft_bound(s));
    s.normalized = -2.5L;
    REQUIRE(exceeds_soft_bound(s));
    s.normalized = 1.9L;
    REQUIRE_FALSE(exceeds_soft_bound(s));
    s.rule = ResidualRule::gx;
    s.normalized = 9.9L;
    REQUIRE_FALSE(exceeds_soft_bound(s));
    s.normalized = 10.1L;
    REQUIRE(exceeds_soft_bound(s));
}

TEST_CASE("empirical envelope constants") {
    // a single point above the main term pins a2 and leaves a1 at zero
    const Theorem5Bounds one = theorem5_bounds({10});
    REQUIRE_THAT((double)one.a2_emp, WithinAbs(0.220632, 1e-6));
    REQUIRE(one.a1_emp == 0.0L);

    // training grid: every F(x) sits below P x, so a2 collapses to zero
    const Theorem5Bounds fit =
        theorem5_bounds({10'000, 100'000, 1'000'000, 10'000'000, 100'000'000});
    REQUIRE_THAT((double)fit.a1_emp, WithinRel(0.8564937414152017, 1e-9));
    REQUIRE(fit.a2_emp == 0.0L);

    // fitted envelope covers a disjoint validation grid
    const long double P = detail::cached_P().value;
    const std::vector<std::uint64_t> validation{30'000, 300'000, 3'000'000};
    const auto rows = fx_report(validation);
    for (const auto& s : rows) {
        const long double xl = static_cast<long double>(s.x);
        const long double lo = P * xl - fit.a1_emp * sqrtl(xl) / logl(xl);
        const long double hi = P * xl + fit.a2_emp * sqrtl(xl);
        REQUIRE(lo <= (long double)s.exact);
        REQUIRE((long double)s.exact <= hi);
    }
    REQUIRE(rows[0].exact == 9898);  // frozen F(30000)
}
