#include <cmath>
#include <numeric>

#include "cubicvs/local.hpp"
#include "doctest.h"

using namespace cubicvs;
using doctest::Approx;

namespace {

double ipow(double b, int e) {
    double r = 1.0;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

TEST_CASE("series_term examples and oracle values") {
    CHECK(series_term(1, 6, {0, 0, 0}) == Approx(1.0));
    CHECK(series_term(1, 6, {5, -2, 9}) == Approx(1.0));
    // tests/oracles/brute_force.py
    CHECK(series_term(2, 6, {0, 0, 0}) == Approx(3.0).epsilon(1e-12));
    CHECK(series_term(2, 6, {1, 1, 1}) == Approx(3.0).epsilon(1e-12));
    CHECK(series_term(3, 6, {0, 0, 0}) == Approx(2.0246913580246906).epsilon(1e-12));
    CHECK(series_term(3, 6, {1, 1, 1}) == Approx(2.0).epsilon(1e-12));
    CHECK(series_term(4, 6, {0, 0, 0}) == Approx(0.1328125).epsilon(1e-12));
    CHECK(std::abs(series_term(4, 6, {1, 1, 1})) < 1e-12);
    CHECK(series_term(5, 6, {0, 0, 0}) == Approx(0.416).epsilon(1e-12));
    CHECK(series_term(5, 6, {1, 1, 1}) == Approx(0.16672).epsilon(1e-12));
}

TEST_CASE("N(q) against the residue-enumeration oracle") {
    const struct {
        i64 q;
        Offset h;
        u64 n;
    } cases[] = {{2, {0, 0, 0}, 2048},       {2, {1, 1, 1}, 2048},       {2, {0, 0, 1}, 0},
                 {3, {0, 0, 0}, 59535},      {3, {1, 1, 1}, 59049},      {3, {0, 0, 1}, 0},
                 {4, {0, 0, 0}, 1083392},    {4, {1, 1, 1}, 1048576},    {4, {0, 0, 1}, 0},
                 {5, {0, 0, 0}, 2765625},    {5, {1, 1, 1}, 2278750},    {5, {0, 0, 1}, 1753125},
                 {8, {0, 0, 0}, 975175680},  {8, {1, 1, 1}, 830472192},  {8, {0, 0, 1}, 0},
                 {9, {0, 0, 0}, 2084134455}, {9, {1, 1, 1}, 1680416442}, {9, {0, 0, 1}, 0}};
    for (const auto& c : cases) CHECK(count_solutions_mod(c.q, 6, c.h) == c.n);
}

TEST_CASE("exact numerators match the floating terms") {
    for (const Offset& h : {Offset{0, 0, 0}, Offset{1, 1, 1}, Offset{0, 0, 1}})
        for (i64 q = 1; q <= 12; ++q) {
            const double term = series_term(q, 6, h);
            const double exact = static_cast<double>(series_term_numerator(q, 6, h)) / ipow(static_cast<double>(q), 9);
            CHECK(std::abs(term - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
        }
}

TEST_CASE("multiplicativity over coprime factors up to q = 36") {
    const Offset h{1, 1, 1};
    for (i64 q1 = 2; q1 <= 18; ++q1)
        for (i64 q2 = q1 + 1; q1 * q2 <= 36; ++q2) {
            if (std::gcd(q1, q2) != 1) continue;
            const i128 whole = series_term_numerator(q1 * q2, 6, h);
            CHECK(whole == series_term_numerator(q1, 6, h) * series_term_numerator(q2, 6, h));
            const double a = series_term(q1 * q2, 6, h);
            const double b = series_term(q1, 6, h) * series_term(q2, 6, h);
            if (whole != 0) {
                CHECK(a == Approx(b).epsilon(1e-8));
            } else {
                CHECK(std::abs(a) < 1e-12);
                CHECK(std::abs(b) < 1e-12);
            }
        }
}

TEST_CASE("Euler product over divisors matches the divisor sum") {
    for (const Offset& h : {Offset{0, 0, 0}, Offset{1, 1, 1}}) {
        for (const auto& [M, factors] :
             {std::pair<i64, std::vector<std::pair<i64, int>>>{60, {{2, 2}, {3, 1}, {5, 1}}},
              {42, {{2, 1}, {3, 1}, {7, 1}}}}) {
            double product = 1.0;
            for (const auto& [p, H] : factors) product *= padic_density_via_sums(p, 6, h, H).value;
            double sum = 0.0;
            for (i64 q = 1; q <= M; ++q)
                if (M % q == 0) sum += series_term(q, 6, h);
            CHECK(sum == Approx(product).epsilon(1e-8));
        }
    }
}

TEST_CASE("singular series partial sums at cutoffs 8 16 32 have shrinking differences") {
    const auto r8 = singular_series_truncated(6, {1, 1, 1}, 8);
    const auto r16 = singular_series_truncated(6, {1, 1, 1}, 16);
    const auto r32 = singular_series_truncated(6, {1, 1, 1}, 32);
    MESSAGE("partial sums " << r8.value << ", " << r16.value << ", " << r32.value);
    CHECK(std::abs(r32.value - r16.value) < std::abs(r16.value - r8.value));
}

TEST_CASE("the 2-adic factor converges level by level") {
    // the level-4 term vanishes, so increments shrink only from level 3 on
    double prev = padic_density_via_counting(2, 6, {1, 1, 1}, 2).value, step = 1e300;
    for (int H = 3; H <= 5; ++H) {
        const double v = padic_density_via_counting(2, 6, {1, 1, 1}, H).value;
        {
            CHECK(std::abs(v - prev) < step);
            step = std::abs(v - prev);
        }
        prev = v;
    }
    CHECK(step < 0.02);
}

TEST_CASE("singular series truncation") {
    CHECK(singular_series_truncated(6, {0, 0, 0}, 1).value == Approx(1.0));
    const auto r32 = singular_series_truncated(6, {1, 1, 1}, 32);
    CHECK(r32.value == Approx(26.87205).epsilon(1e-6));
    CHECK(r32.imag_residue < 1e-10);
    CHECK(r32.method == "truncated-series");
    // h fails the condition mod 2: q = 2 already cancels most of q = 1.
    const auto bad = singular_series_truncated(6, {0, 0, 1}, 2);
    CHECK(std::abs(bad.value) < 0.5);
}

TEST_CASE("p-adic densities") {
    for (i64 p : {2, 3, 5, 7}) {
        CHECK(padic_density_via_sums(p, 6, {1, 2, 3}, 0).value == Approx(1.0));
        CHECK(padic_density_via_counting(p, 6, {1, 2, 3}, 0).value == Approx(1.0));
    }
    CHECK(std::abs(padic_density_via_sums(2, 6, {0, 0, 1}, 3).value) < 1e-12);
    CHECK(padic_density_via_counting(2, 6, {0, 0, 1}, 3).value == 0.0);
    CHECK(padic_density_via_sums(5, 6, {0, 0, 0}, 1).value == Approx(1.416).epsilon(1e-12));
    CHECK(padic_density_via_counting(3, 6, {1, 1, 3}, 1).value == 0.0);
    for (i64 p : {2, 3, 5})
        for (int H = 0; H <= 2; ++H)
            for (const Offset& h : {Offset{0, 0, 0}, Offset{1, 1, 1}, Offset{0, 0, 1}, Offset{2, -4, 8}}) {
                const auto a = padic_density_via_sums(p, 6, h, H);
                const auto b = padic_density_via_counting(p, 6, h, H);
                CHECK(std::abs(a.value - b.value) < 1e-10);
                CHECK(a.imag_residue < 1e-10);
            }
}

TEST_CASE("insoluble offsets have a vanishing 2- or 3-adic density") {
    for (i64 a = -3; a <= 3; ++a)
        for (i64 b = -3; b <= 3; ++b)
            for (i64 c = -3; c <= 3; ++c) {
                const Offset h{a, b, c};
                if (congruence_soluble(h)) continue;
                const bool vanishes = padic_density_via_counting(2, 6, h, 1).value == 0.0 ||
                                      padic_density_via_counting(3, 6, h, 1).value == 0.0;
                CHECK(vanishes);
            }
}

TEST_CASE("budget guard on the sums route") {
    CHECK_THROWS_AS(padic_density_via_sums(2, 6, {0, 0, 0}, 8), BudgetExceeded);
}

TEST_CASE("Hensel witnesses") {
    const auto w7 = hensel_nonsingular_search(7, 6, {0, 0, 0}, 4);
    REQUIRE(w7.has_value());
    CHECK(w7->valuation == 0);
    CHECK(w7->level >= 4);
    CHECK(verify_witness(*w7, 6, {0, 0, 0}));

    CHECK_FALSE(hensel_nonsingular_search(2, 6, {0, 0, 1}, 3).has_value());

    const auto w3 = hensel_nonsingular_search(3, 6, {1, 1, 1}, 3);
    REQUIRE(w3.has_value());
    CHECK(w3->level >= 3);
    CHECK(w3->level >= 2 * w3->valuation + 1);
    CHECK(verify_witness(*w3, 6, {1, 1, 1}));

    const auto w2 = hensel_nonsingular_search(2, 6, {1, 1, 1}, 6);
    REQUIRE(w2.has_value());
    CHECK(w2->valuation == 2);
    CHECK(verify_witness(*w2, 6, {1, 1, 1}));

    // A tampered witness fails verification.
    auto bad = *w7;
    bad.x[0] += 1;
    CHECK_FALSE(verify_witness(bad, 6, {0, 0, 0}));
}

TEST_CASE("primality helper") {
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
}
