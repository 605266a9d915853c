#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "mminf/model.hpp"

using namespace mminf;

TEST_CASE("parameter validation", "[model]") {
    SECTION("valid rates pass through") {
        const auto p = make_params(1.5, 0.25);
        REQUIRE(p.a == 1.5);
        REQUIRE(p.q == 0.25);
    }
    SECTION("nonpositive a is rejected, naming the field") {
        REQUIRE_THROWS_AS(make_params(0.0, 1.0), parameter_error);
        REQUIRE_THROWS_WITH(make_params(-1.0, 1.0), Catch::Matchers::ContainsSubstring("'a'"));
    }
    SECTION("nonpositive q is rejected, naming the field") {
        REQUIRE_THROWS_AS(make_params(1.0, -2.0), parameter_error);
        REQUIRE_THROWS_WITH(make_params(1.0, 0.0), Catch::Matchers::ContainsSubstring("'q'"));
    }
    SECTION("non-finite rates are rejected") {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double inf = std::numeric_limits<double>::infinity();
        REQUIRE_THROWS_AS(make_params(nan, 1.0), parameter_error);
        REQUIRE_THROWS_AS(make_params(1.0, inf), parameter_error);
    }
}

TEST_CASE("transition rates", "[model]") {
    const ModelParams p{1.0, 1.0};
    SECTION("state 0 is absorbing") { REQUIRE(rate_out_of(p, 0) == 0.0); }
    SECTION("state k has outflow a + k q") {
        REQUIRE(rate_out_of(p, 3) == 4.0);
        REQUIRE(rate_out_of(ModelParams{2.0, 0.5}, 4) == 4.0);
    }
    SECTION("outflow is increasing in the state") {
        double prev = rate_out_of(p, 1);
        for (long k = 2; k <= 50; ++k) {
            const double r = rate_out_of(p, k);
            REQUIRE(r > prev);
            prev = r;
        }
    }
    SECTION("negative state is rejected") {
        REQUIRE_THROWS_AS(rate_out_of(p, -1), parameter_error);
    }
}

TEST_CASE("time normalization", "[model]") {
    SECTION("q is scaled to 1") {
        const auto n = normalize(ModelParams{3.0, 2.0});
        REQUIRE(n.params.a == Catch::Approx(1.5).margin(0));
        REQUIRE(n.params.q == 1.0);
        REQUIRE(n.scale == 2.0);
    }
    SECTION("already unit q is a no-op") {
        const auto n = normalize(ModelParams{1.0, 1.0});
        REQUIRE(n.params.a == 1.0);
        REQUIRE(n.scale == 1.0);
    }
    SECTION("q below 1 scales up") {
        const auto n = normalize(ModelParams{0.5, 0.25});
        REQUIRE(n.params.a == Catch::Approx(2.0).margin(0));
        REQUIRE(n.scale == 0.25);
    }
}
