#include <algorithm>
#include <random>
#include <vector>

#include "cubicvs/core.hpp"
#include "doctest.h"

using namespace cubicvs;

TEST_CASE("moment_of examples") {
    const std::vector<i64> a{1}, b{1, 2}, c{2, 2, 2};
    CHECK(moment_of(a, 1) == MomentVector{1, 1, 1});
    CHECK(moment_of(b, 2) == MomentVector{3, 5, 9});
    CHECK(moment_of(c, 2) == MomentVector{6, 12, 24});
}

TEST_CASE("moment_of rejects entries outside [1, X]") {
    const std::vector<i64> bad{0, 1}, big{4};
    CHECK_THROWS(moment_of(bad, 3));
    CHECK_THROWS(moment_of(big, 3));
}

TEST_CASE("moment_of is permutation invariant and inside moment_bounds") {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int s = 1 + static_cast<int>(eng() % 6);
        const i64 X = 1 + static_cast<i64>(eng() % 50);
        std::vector<i64> t(static_cast<std::size_t>(s));
        for (auto& v : t) v = 1 + static_cast<i64>(eng() % static_cast<u64>(X));
        const MomentVector m = moment_of(t, X);
        std::shuffle(t.begin(), t.end(), eng);
        CHECK(moment_of(t, X) == m);
        const auto [lo, hi] = moment_bounds(s, X);
        for (int j = 0; j < 3; ++j) {
            CHECK(lo[j] <= m[j]);
            CHECK(m[j] <= hi[j]);
        }
        CHECK(m.m1 <= m.m2);
        CHECK(m.m2 <= m.m3);
    }
}

TEST_CASE("congruence_soluble examples") {
    CHECK(congruence_soluble({1, 1, 1}));
    CHECK_FALSE(congruence_soluble({0, 0, 1}));
    CHECK(congruence_soluble({1, 3, 7}));
}

TEST_CASE("congruence_soluble is symmetric under h -> -h") {
    for (i64 a = -6; a <= 6; ++a)
        for (i64 b = -6; b <= 6; ++b)
            for (i64 c = -6; c <= 6; ++c) {
                const Offset h{a, b, c};
                CHECK(congruence_soluble(h) == congruence_soluble(-h));
            }
}

TEST_CASE("moment_bounds examples") {
    CHECK(moment_bounds(1, 2) == std::pair{MomentVector{1, 1, 1}, MomentVector{2, 4, 8}});
    CHECK(moment_bounds(6, 1) == std::pair{MomentVector{6, 6, 6}, MomentVector{6, 6, 6}});
    CHECK(moment_bounds(2, 3) == std::pair{MomentVector{2, 2, 2}, MomentVector{6, 18, 54}});
}

TEST_CASE("validate_params") {
    CHECK_NOTHROW(validate_params({6, 32}));
    CHECK_THROWS_AS(validate_params({0, 5}), ConfigError);
    CHECK_THROWS_AS(validate_params({1, 0}), ConfigError);
    CHECK_THROWS_AS(validate_params({kMaxPairs + 1, 2}), ConfigError);
    // Moment box far beyond a 64-bit key.
    CHECK_THROWS_AS(validate_params({6, 100000}), ConfigError);
}

TEST_CASE("KeyCodec round trip and difference packing") {
    const KeyCodec codec(3, 1, 5);
    std::mt19937_64 eng(3);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<i64> t(3);
        for (auto& v : t) v = 1 + static_cast<i64>(eng() % 5);
        const MomentVector m = moment_of(t, 5);
        const u64 key = codec.pack(m);
        CHECK(codec.unpack(key) == m);
        CHECK(key == codec.element_weight(t[0]) + codec.element_weight(t[1]) + codec.element_weight(t[2]) -
                         codec.base_shift());
    }
    // Out-of-box differences are "no match", not errors.
    CHECK_FALSE(codec.pack_difference(codec.min(), {1, 0, 0}).has_value());
    CHECK(codec.pack_difference(MomentVector{4, 6, 10}, {1, 1, 1}) == codec.pack({3, 5, 9}));
}

TEST_CASE("checked arithmetic") {
    CHECK(checked_pow(10, 6) == 1'000'000u);
    CHECK_THROWS_AS(checked_pow(10, 20), OverflowError);
    CHECK_THROWS_AS(checked_mul(u64{1} << 40, u64{1} << 30), OverflowError);
    CHECK(mod_floor(-7, 3) == 2);
}
