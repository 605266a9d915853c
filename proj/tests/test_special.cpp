#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "golden_values.hpp"
#include "mminf/special.hpp"
#include "oracles.hpp"

using namespace mminf;

TEST_CASE("bargamma series: spot values", "[special]") {
    SECTION("s = 2, x = 0 gives 1/s") {
        const auto r = bargamma_series(2.0, 0.0, 1e-14);
        REQUIRE(r.value == Catch::Approx(0.5).margin(1e-15));
        REQUIRE(r.terms_or_nodes_used >= 1);
    }
    SECTION("s = 1 reduces to (1 - e^{-x})/x") {
        const auto r = bargamma_series(1.0, 1.0, 1e-14);
        REQUIRE(std::fabs(r.value - (1.0 - std::exp(-1.0))) < 1e-14);
    }
    SECTION("continued value at s = -0.5, x = -1") {
        const auto r = bargamma_series(-0.5, -1.0, 1e-14);
        REQUIRE(std::fabs(r.value - golden::bargamma_m0p5_m1) < 1e-13);
    }
    SECTION("sign structure for s in (-1, 0), x < 0: one negative term") {
        // bargamma(-u, -x) = -1/u + sum_{k>=1} x^k/((k-u) k!), all later
        // terms positive; reconstruct the split directly.
        const double u = 0.3, x = 1.0;
        const auto whole = bargamma_series(-u, -x, 1e-14);
        long double tail = 0.0L;
        long double term = 1.0L;
        for (int k = 1; k < 60; ++k) {
            term *= x / k;
            tail += term / (k - static_cast<long double>(u));
        }
        REQUIRE(tail > 0.0L);
        REQUIRE(std::fabs(whole.value - static_cast<double>(tail - 1.0L / u)) < 1e-13);
    }
}

TEST_CASE("bargamma series: domain guards", "[special]") {
    REQUIRE_THROWS_AS(bargamma_series(0.0, 1.0, 1e-12), domain_error);
    REQUIRE_THROWS_AS(bargamma_series(-2.0, 1.0, 1e-12), domain_error);
    REQUIRE_THROWS_AS(bargamma_series(1e-9, 1.0, 1e-12), domain_error);
    REQUIRE_THROWS_AS(bargamma_series(-3.0 + 5e-9, 2.0, 1e-12), domain_error);
    REQUIRE_THROWS_AS(bargamma_series(0.5, 701.0, 1e-12), domain_error);
    REQUIRE_THROWS_AS(bargamma_series(0.5, -701.0, 1e-12), domain_error);
    REQUIRE_THROWS_AS(bargamma_series(0.5, 1.0, 0.0), parameter_error);
    REQUIRE_THROWS_AS(bargamma_series(0.5, 1.0, -1e-12), parameter_error);
    // Just outside the guard band is fine.
    REQUIRE_NOTHROW(bargamma_series(1.1e-8, 1.0, 1e-12));
    REQUIRE_NOTHROW(bargamma_series(-1.0 + 1.1e-8, 1.0, 1e-12));
}

TEST_CASE("bargamma series agrees with the 50-digit oracle", "[special]") {
    const double svals[] = {-0.9, -0.5, -0.1, 0.1, 0.5, 1.5, 2.5, 5.0, -1.5, -2.5};
    const double xvals[] = {-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0};
    for (double s : svals) {
        for (double x : xvals) {
            const auto r = bargamma_series(s, x, 1e-12);
            const double ref = oracle::bargamma(s, x);
            const double gate = 2.0 * r.abs_error_estimate + 1e-14 * (1.0 + std::fabs(ref));
            INFO("s=" << s << " x=" << x << " value=" << r.value << " ref=" << ref);
            REQUIRE(std::fabs(r.value - ref) <= gate);
        }
    }
}

TEST_CASE("error estimates are honest", "[special]") {
    const double svals[] = {-0.7, 0.3, 2.0};
    const double xvals[] = {-10.0, -1.0, 2.0, 10.0};
    for (double s : svals) {
        for (double x : xvals) {
            const auto coarse = bargamma_series(s, x, 1e-8);
            const auto fine = bargamma_series(s, x, 1e-15);
            INFO("s=" << s << " x=" << x);
            REQUIRE(std::fabs(coarse.value - fine.value) <=
                    coarse.abs_error_estimate + fine.abs_error_estimate + 1e-15);
        }
    }
}

TEST_CASE("gamma_lower_scaled", "[special]") {
    SECTION("s = 1 reduces to (1 - e^{-x})/x") {
        const auto r = gamma_lower_scaled(1.0, 1.0, 1e-13);
        REQUIRE(std::fabs(r.value - (1.0 - std::exp(-1.0))) < 1e-12);
    }
    SECTION("spot value s = 0.5, x = 2") {
        const auto r = gamma_lower_scaled(0.5, 2.0, 1e-13);
        REQUIRE(std::fabs(r.value - golden::gamma_lower_scaled_0p5_2) < 1e-12);
    }
    SECTION("domain guards") {
        REQUIRE_THROWS_AS(gamma_lower_scaled(-0.2, 1.0, 1e-12), domain_error);
        REQUIRE_THROWS_AS(gamma_lower_scaled(0.0, 1.0, 1e-12), domain_error);
        REQUIRE_THROWS_AS(gamma_lower_scaled(1.0, 0.0, 1e-12), domain_error);
        REQUIRE_THROWS_AS(gamma_lower_scaled(1.0, -1.0, 1e-12), domain_error);
    }
    SECTION("quadrature and series paths agree within stated errors") {
        for (double s : {0.25, 0.5, 1.0, 2.0, 5.0}) {
            for (double x : {0.1, 1.0, 5.0, 20.0}) {
                const auto quad = gamma_lower_scaled(s, x, 1e-12);
                const auto series = bargamma_series(s, x, 1e-12);
                INFO("s=" << s << " x=" << x);
                REQUIRE(std::fabs(quad.value - series.value) <=
                        2.0 * (quad.abs_error_estimate + series.abs_error_estimate) +
                            1e-15);
            }
        }
    }
}

TEST_CASE("big_f", "[special]") {
    SECTION("x = 0 gives 0") {
        const auto r = big_f(2.0, 0.0, 1e-13);
        REQUIRE(std::fabs(r.value) < 1e-15);
    }
    SECTION("s = 0, x = 1 gives 1 - e") {
        const auto r = big_f(0.0, 1.0, 1e-13);
        REQUIRE(std::fabs(r.value - (1.0 - std::exp(1.0))) < 1e-12);
    }
    SECTION("spot value in the continued regime s < 0, x < 0") {
        const auto r = big_f(-0.45, -1.0, 1e-13);
        REQUIRE(std::fabs(r.value - golden::big_f_m0p45_m1) < 1e-12);
    }
    SECTION("domain guards at s <= -1") {
        REQUIRE_THROWS_AS(big_f(-1.0, 1.0, 1e-12), domain_error);
        REQUIRE_THROWS_AS(big_f(-1.0001, 1.0, 1e-12), domain_error);
    }
}

TEST_CASE("series/quadrature identity residual", "[special]") {
    SECTION("both-positive regime") {
        REQUIRE(identity_residual(1.0, 1.0, 1e-12) < 1e-12);
    }
    SECTION("continued regime") {
        REQUIRE(identity_residual(-0.5, -2.0, 1e-12) < 1e-12);
    }
    SECTION("x = 0 is exact") {
        REQUIRE(identity_residual(0.3, 0.0, 1e-12) < 1e-14);
    }
    SECTION("coarse grid stays under the certification gate") {
        for (int i = 0; i < 10; ++i) {
            const double s = -0.95 + 5.95 * (i + 1) / 10.0;
            for (int j = 0; j < 10; ++j) {
                const double x = -10.0 + 20.0 * j / 9.0;
                INFO("s=" << s << " x=" << x);
                REQUIRE(identity_residual(s, x, 1e-12) <= 1e-10);
            }
        }
    }
    SECTION("domain guards") {
        REQUIRE_THROWS_AS(identity_residual(-1.2, 1.0, 1e-12), domain_error);
        REQUIRE_THROWS_AS(identity_residual(0.0, 1.0, 1e-12), domain_error);
    }
}
