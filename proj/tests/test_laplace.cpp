#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "golden_values.hpp"
#include "mminf/laplace.hpp"

using namespace mminf;

namespace {
const ModelParams kUnit{1.0, 1.0};

double theta_star_unit() {
    static const double v = solve_theta_star_series(kUnit).theta;
    return v;
}
}  // namespace

TEST_CASE("mean absorption time", "[laplace]") {
    SECTION("a = q = 1 gives e - 1") {
        REQUIRE(std::fabs(mean_absorption_time(kUnit) - (std::exp(1.0) - 1.0)) < 1e-15);
    }
    SECTION("a = 2, q = 1") {
        REQUIRE(std::fabs(mean_absorption_time(ModelParams{2.0, 1.0}) -
                          golden::mean_time_a2_q1) < 1e-14);
    }
    SECTION("a -> 0 limit is 1/q") {
        REQUIRE(std::fabs(mean_absorption_time(ModelParams{1e-12, 1.0}) - 1.0) < 1e-11);
    }
    SECTION("overflow guard") {
        REQUIRE_THROWS_AS(mean_absorption_time(ModelParams{800.0, 1.0}), domain_error);
    }
}

TEST_CASE("MGF spot values", "[laplace]") {
    const double th_star = theta_star_unit();

    SECTION("theta = 0 is exactly 1") {
        REQUIRE(mgf_absorption(kUnit, 0.0).value == 1.0);
    }
    SECTION("tiny theta, inside the bargamma pole band") {
        const auto m = mgf_absorption(kUnit, 1e-8);
        REQUIRE(std::fabs(m.value - golden::mgf_1em8) < 1e-12);
    }
    SECTION("theta = 0.5 theta*") {
        const auto m = mgf_absorption(kUnit, 0.5 * th_star);
        REQUIRE(std::fabs(m.value - golden::mgf_half_theta_star) < 1e-11);
    }
    SECTION("theta = 0.99 theta*") {
        const auto m = mgf_absorption(kUnit, 0.99 * th_star);
        REQUIRE(std::fabs(m.value - golden::mgf_0p99_theta_star) < 1e-8);
    }
}

TEST_CASE("MGF shape", "[laplace]") {
    const double th_star = theta_star_unit();

    SECTION(">= 1 and increasing on [0, theta*)") {
        double prev = 1.0;
        for (int i = 1; i <= 18; ++i) {
            const double th = 0.05 * i * th_star;
            const double v = mgf_absorption_with_rate(kUnit, th, th_star).value;
            INFO("theta=" << th);
            REQUIRE(v >= prev);
            prev = v;
        }
    }
    SECTION("negative theta gives values in (0, 1)") {
        const double v = mgf_absorption_with_rate(kUnit, -1.0, th_star).value;
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }
    SECTION("derivative at 0 equals the mean (central difference)") {
        const double h = 1e-5;
        const double up = mgf_absorption_with_rate(kUnit, h, th_star).value;
        const double dn = mgf_absorption_with_rate(kUnit, -h, th_star).value;
        const double deriv = (up - dn) / (2.0 * h);
        const double mean = mean_absorption_time(kUnit);
        REQUIRE(std::fabs(deriv - mean) / mean < 1e-6);
    }
}

TEST_CASE("MGF domain boundaries", "[laplace]") {
    const double th_star = theta_star_unit();
    REQUIRE_THROWS_AS(mgf_absorption_with_rate(kUnit, th_star, th_star), domain_error);
    REQUIRE_THROWS_AS(mgf_absorption_with_rate(kUnit, th_star + 0.1, th_star),
                      domain_error);
    REQUIRE_THROWS_AS(mgf_absorption_with_rate(kUnit, th_star - 1e-10, th_star),
                      near_singularity_error);
    REQUIRE_NOTHROW(mgf_absorption_with_rate(kUnit, th_star - 1e-8, th_star));
}

TEST_CASE("MGF blows up where the survival rate sits", "[laplace]") {
    // Scan upward toward theta*; the first crossing of 1e6 must land within
    // 1e-6 of theta* (the transform has a simple pole there).
    const double th_star = theta_star_unit();
    double first_cross = -1.0;
    for (int k = 0; k < 1000; ++k) {
        const double th = th_star - 1e-5 + k * 1e-8;
        const double v = mgf_absorption_with_rate(kUnit, th, th_star).value;
        if (v > 1e6) {
            first_cross = th;
            break;
        }
    }
    REQUIRE(first_cross > 0.0);
    REQUIRE(th_star - first_cross <= 1e-6);
    REQUIRE(th_star - first_cross > 0.0);
}

TEST_CASE("MGF respects the time change", "[laplace]") {
    // Scaling both rates by c scales T by 1/c: MGF_{ca,cq}(theta) =
    // MGF_{a,q}(theta/c).
    const double th_star = theta_star_unit();
    for (double theta : {0.1, 0.3, 0.4}) {
        REQUIRE(theta < th_star);
        const double lhs = mgf_absorption(ModelParams{2.0, 2.0}, 2.0 * theta).value;
        const double rhs = mgf_absorption(kUnit, theta).value;
        INFO("theta=" << theta);
        REQUIRE(std::fabs(lhs - rhs) < 1e-11);
    }
}
