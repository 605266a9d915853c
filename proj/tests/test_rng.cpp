#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>

#include "mminf/rng.hpp"

using namespace mminf;

// Known-answer vectors produced by an independent Philox-4x64-10
// implementation (counter increments in word 0 with carry).

TEST_CASE("Philox-4x64-10 known answers", "[rng]") {
    SECTION("unit counter, zero key") {
        const auto b0 = Philox4x64::block({1, 0, 0, 0}, {0, 0});
        REQUIRE(b0[0] == 0x02f4ba6408e4d89bull);
        REQUIRE(b0[1] == 0x3dd62b0b9ca8c5b2ull);
        REQUIRE(b0[2] == 0x1c8667a55d902e79ull);
        REQUIRE(b0[3] == 0x907d7a052fd5b4dcull);
        const auto b1 = Philox4x64::block({2, 0, 0, 0}, {0, 0});
        REQUIRE(b1[0] == 0x809bf322883987c3ull);
        REQUIRE(b1[1] == 0x471128b9e807f7ddull);
        REQUIRE(b1[2] == 0xf250ba0dbec065b7ull);
        REQUIRE(b1[3] == 0xfc6ed66767a457bcull);
    }
    SECTION("mixed counter and key") {
        const auto b0 = Philox4x64::block({2, 2, 3, 4}, {0xdeadbeefull, 0xcafebabeull});
        REQUIRE(b0[0] == 0x8730fa6a39cb2758ull);
        REQUIRE(b0[1] == 0xa6ecfda93bd56f75ull);
        REQUIRE(b0[2] == 0x7744166c917e628bull);
        REQUIRE(b0[3] == 0x925082b95f9d7389ull);
        const auto b1 = Philox4x64::block({3, 2, 3, 4}, {0xdeadbeefull, 0xcafebabeull});
        REQUIRE(b1[0] == 0x839dc87b07e36480ull);
        REQUIRE(b1[1] == 0xffc601e1eb01f757ull);
        REQUIRE(b1[2] == 0x7e61538501401d9dull);
        REQUIRE(b1[3] == 0xba766b4b77611b1dull);
    }
    SECTION("zero counter, all-ones key") {
        const std::uint64_t f = ~0ull;
        const auto b = Philox4x64::block({0, 0, 0, 0}, {f, f});
        REQUIRE(b[0] == 0x44b7493d1acfc229ull);
        REQUIRE(b[1] == 0x6636af8e997921ddull);
        REQUIRE(b[2] == 0x3f73e132b5b3780eull);
        REQUIRE(b[3] == 0x605644dde03b01b1ull);
    }
    SECTION("stream-style counter") {
        const auto b0 = Philox4x64::block({8, 0, 0, 0}, {42, 0x9e3779b97f4a8000ull});
        REQUIRE(b0[0] == 0xf862b91babb706c4ull);
        REQUIRE(b0[1] == 0x0a1aff22351ca7bcull);
        REQUIRE(b0[2] == 0xdee0310856ebb18cull);
        REQUIRE(b0[3] == 0x17a7a6e76c78d645ull);
        const auto b1 = Philox4x64::block({9, 0, 0, 0}, {42, 0x9e3779b97f4a8000ull});
        REQUIRE(b1[0] == 0xfaac281b92b55514ull);
        REQUIRE(b1[1] == 0x144e28dcb9e17b2eull);
        REQUIRE(b1[2] == 0x76283f5658542b16ull);
        REQUIRE(b1[3] == 0x11bcd87236741428ull);
    }
}

TEST_CASE("stream interface", "[rng]") {
    SECTION("matches raw blocks in order") {
        PhiloxStream s(123, 5);
        const auto b0 = Philox4x64::block({5, 0, 0, 0}, {123, kStreamSalt});
        const auto b1 = Philox4x64::block({5, 1, 0, 0}, {123, kStreamSalt});
        for (int i = 0; i < 4; ++i) REQUIRE(s.next_u64() == b0[i]);
        for (int i = 0; i < 4; ++i) REQUIRE(s.next_u64() == b1[i]);
    }
    SECTION("deterministic per (seed, stream)") {
        PhiloxStream s1(9, 2), s2(9, 2);
        for (int i = 0; i < 100; ++i) REQUIRE(s1.next_u64() == s2.next_u64());
    }
    SECTION("distinct streams differ") {
        PhiloxStream s1(9, 2), s2(9, 3), s3(10, 2);
        int equal12 = 0, equal13 = 0;
        for (int i = 0; i < 64; ++i) {
            const auto a = s1.next_u64();
            if (a == s2.next_u64()) ++equal12;
            if (a == s3.next_u64()) ++equal13;
        }
        REQUIRE(equal12 == 0);
        REQUIRE(equal13 == 0);
    }
}

TEST_CASE("variate generation", "[rng]") {
    SECTION("uniforms live in [0, 1) with mean 1/2") {
        PhiloxStream s(7, 0);
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double u = s.next_double();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
        }
        REQUIRE(std::fabs(sum / 100000.0 - 0.5) < 0.005);
    }
    SECTION("exponentials have the requested mean") {
        PhiloxStream s(7, 1);
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double e = s.next_exponential(2.0);
            REQUIRE(e >= 0.0);
            sum += e;
        }
        REQUIRE(std::fabs(sum / 100000.0 - 0.5) < 0.01);
    }
}
