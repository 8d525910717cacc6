#include <cmath>
#include <numeric>
#include <random>

#include "cubicvs/count.hpp"
#include "cubicvs/expsum.hpp"
#include "doctest.h"

using namespace cubicvs;
using doctest::Approx;

namespace {

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("weyl_sum_f examples") {
    CHECK(near(weyl_sum_f(PhasePoint{0, 0, 0}, 7), 7.0, 1e-12));
    CHECK(near(weyl_sum_f(PhasePoint{0.5, 0, 0}, 2), 0.0, 1e-12));
}

TEST_CASE("f: |f| <= X, conjugate symmetry and periodicity") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const PhasePoint a{u(eng), u(eng), u(eng)};
        const i64 X = 1 + static_cast<i64>(eng() % 500);
        const cplx f = weyl_sum_f(a, X);
        CHECK(std::abs(f) <= X * (1 + 1e-12));
        CHECK(near(weyl_sum_f(-a, X), std::conj(f), 1e-9 * X));
        // Dyadic phases so that the integer shift is exact in floating point.
        const PhasePoint d{std::ldexp(std::floor(std::ldexp(a.a1, 24)), -24),
                           std::ldexp(std::floor(std::ldexp(a.a2, 24)), -24),
                           std::ldexp(std::floor(std::ldexp(a.a3, 24)), -24)};
        CHECK(near(weyl_sum_f(PhasePoint{d.a1 + 1, d.a2 - 2, d.a3 + 3}, X), weyl_sum_f(d, X), 1e-9 * X));
    }
}

TEST_CASE("block identity f(a/q; qm) = m S(q,a)") {
    std::mt19937_64 eng(9);
    for (i64 q = 1; q <= 20; ++q)
        for (i64 m = 1; m <= 5; ++m)
            for (int k = 0; k < 4; ++k) {
                const RationalCenter c{q, static_cast<i64>(eng() % static_cast<u64>(q)),
                                       static_cast<i64>(eng() % static_cast<u64>(q)),
                                       static_cast<i64>(eng() % static_cast<u64>(q))};
                const cplx S = complete_sum_S(c);
                const cplx expect = static_cast<double>(m) * S;
                const double scale = std::max(1.0, std::abs(expect));
                CHECK(std::abs(weyl_sum_f(c, q * m) - expect) <= 1e-9 * scale);
                // The floating route reduces the same phases per term.
                CHECK(std::abs(weyl_sum_f(c.as_phase(), q * m) - expect) <= 1e-9 * scale);
            }
}

TEST_CASE("rational route stays accurate at large X") {
    // f(a/q; X) with X a multiple of q is m S(q,a) exactly; X^3 ~ 8e15.
    const RationalCenter c{7, 3, 5, 1};
    const i64 X = 7 * 28571;
    CHECK(std::abs(weyl_sum_f(c, X) - 28571.0 * complete_sum_S(c)) <= 1e-6);
}

TEST_CASE("complete_sum_S examples and oracle values") {
    CHECK(near(complete_sum_S({1, 0, 0, 0}), 1.0, 1e-12));
    CHECK(near(complete_sum_S({2, 1, 1, 1}), 0.0, 1e-12));
    CHECK(near(complete_sum_S({3, 0, 0, 1}), 0.0, 1e-12));
    // tests/oracles/brute_force.py
    CHECK(near(complete_sum_S({5, 1, 2, 3}), 0.0, 1e-12));
    CHECK(near(complete_sum_S({7, 0, 0, 1}), cplx(4.740938811152401, 0), 1e-12));
    CHECK(near(complete_sum_S({9, 1, 0, 3}), 0.0, 1e-12));
    CHECK(near(complete_sum_S({12, 1, 5, 7}), cplx(1.7320508075688767, -3.0), 1e-12));
}

TEST_CASE("complete_sums_all matches complete_sum_S") {
    for (i64 q : {1, 2, 6, 11}) {
        const auto all = complete_sums_all(q);
        for (i64 a3 = 0; a3 < q; ++a3)
            for (i64 a2 = 0; a2 < q; ++a2)
                for (i64 a1 = 0; a1 < q; ++a1)
                    CHECK(near(all[static_cast<std::size_t>(a1 + q * (a2 + q * a3))],
                               complete_sum_S({q, a1, a2, a3}), 1e-10));
    }
}

TEST_CASE("|S(q,a)| / q^(2/3) stays bounded for q <= 200") {
    std::mt19937_64 eng(13);
    double low = 0.0, high = 0.0;
    for (i64 q = 1; q <= 200; ++q) {
        double m = 0.0;
        for (int k = 0; k < 200; ++k) {
            const RationalCenter c{q, static_cast<i64>(eng() % static_cast<u64>(q)),
                                   static_cast<i64>(eng() % static_cast<u64>(q)),
                                   static_cast<i64>(eng() % static_cast<u64>(q))};
            if (c.content() != 1) continue;
            m = std::max(m, std::abs(complete_sum_S(c)) / std::pow(static_cast<double>(q), 2.0 / 3.0));
        }
        (q <= 100 ? low : high) = std::max(q <= 100 ? low : high, m);
    }
    MESSAGE("max ratio q<=100: " << low << ", 100<q<=200: " << high);
    CHECK(high <= 2.0 * low);
    CHECK(high < 6.0);
}

TEST_CASE("shifted_sum_g examples") {
    CHECK(near(shifted_sum_g({0.3, 0, 0}, 0.0, 5, {2, -1, 4}), 5.0, 1e-12));
    // 3 h2 a3 integral and h1 = 0: every phase is an integer.
    CHECK(near(shifted_sum_g({0.7, 0.2, 1.0 / 6.0}, 0.0, 40, {0, 2, 9}), 40.0, 1e-9));
    std::mt19937_64 eng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i)
        CHECK(std::abs(shifted_sum_g({u(eng), u(eng), u(eng)}, u(eng), 300, {1, 2, 3})) <= 300 * (1 + 1e-12));
}

TEST_CASE("oscillatory_I examples") {
    CHECK(near(oscillatory_I({0, 0, 0}, 1e-10).value, 1.0, 1e-10));
    CHECK(near(oscillatory_I({1, 0, 0}, 1e-10).value, 0.0, 1e-10));
}

TEST_CASE("oscillatory_I against closed form and the mpmath oracle") {
    for (double b : {0.25, -1.7, 3.3, 40.5}) {
        const cplx closed = (std::exp(cplx(0, 2 * M_PI * b)) - 1.0) / cplx(0, 2 * M_PI * b);
        CHECK(near(oscillatory_I({b, 0, 0}, 1e-11).value, closed, 1e-9));
    }
    // tests/oracles/brute_force.py (mpmath at 30 digits)
    const struct {
        PhasePoint beta;
        cplx value;
    } cases[] = {{{1.0, 2.0, 3.0}, {0.04807616665224404, 0.10555291551065855}},
                 {{0.0, 5.0, 0.0}, {0.11155104351666388, 0.09589989423347145}},
                 {{-2.5, 0.0, 7.0}, {-0.24754455314528007, -0.13757555451078965}},
                 {{0.3, -0.7, 11.0}, {0.1609837746223627, 0.13570594923510493}}};
    for (const auto& c : cases) {
        const QuadResult r = oscillatory_I(c.beta, 1e-11);
        CHECK(r.converged);
        CHECK(near(r.value, c.value, 1e-9));
        CHECK(near(oscillatory_I_gauss(c.beta), c.value, 1e-9));
    }
}

TEST_CASE("Gauss rule agrees with adaptive Simpson and |I(-b)| = |I(b)|") {
    std::mt19937_64 eng(21);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 40; ++i) {
        const PhasePoint b{u(eng), u(eng), u(eng)};
        const cplx s = oscillatory_I(b, 1e-11).value;
        CHECK(near(oscillatory_I_gauss(b), s, 1e-9));
        CHECK(std::abs(oscillatory_I(-b, 1e-11).value) == Approx(std::abs(s)).epsilon(1e-8));
    }
}

TEST_CASE("I decays at least like (1 + |b|)^(-1/3) along a ray") {
    const PhasePoint dir{0.3, -0.5, 1.0};
    double worst = 0.0;
    for (double t = 1.0; t <= 4096.0; t *= 2.0) {
        const PhasePoint b{t * dir.a1, t * dir.a2, t * dir.a3};
        const double mag = std::abs(oscillatory_I(b, 1e-10).value);
        worst = std::max(worst, mag * std::pow(1.0 + std::abs(b.a1) + std::abs(b.a2) + std::abs(b.a3), 1.0 / 3.0));
    }
    CHECK(worst < 3.0);
}

TEST_CASE("scaled_I") {
    CHECK(near(scaled_I({0, 0, 0}, 10, 1e-9).value, 10.0, 1e-9));
    const PhasePoint b{0.013, -0.0021, 0.00037};
    const i64 X = 20;
    const cplx direct = static_cast<double>(X) * oscillatory_I({b.a1 * X, b.a2 * X * X, b.a3 * X * X * X}, 1e-12).value;
    CHECK(near(scaled_I(b, X, 1e-9).value, direct, 1e-8));
    CHECK(std::abs(scaled_I(b, X, 1e-9).value) <= X * (1 + 1e-9));
}

TEST_CASE("arc approximant V") {
    CHECK(near(arc_approximant_V({0, 0, 0}, {1, 0, 0, 0}, 5), 5.0, 1e-8));
    std::mt19937_64 eng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const PhasePoint a{u(eng), u(eng), u(eng)};
        const RationalCenter c{1 + static_cast<i64>(eng() % 6), 1, 0, 1};
        CHECK(std::abs(arc_approximant_V(a, c, 200)) <= 200 * (1 + 1e-8));
    }
    // At a centre, |f(a/q;X) - (X/q) S(q,a)| <= q.
    for (i64 q = 1; q <= 10; ++q)
        for (i64 a3 = 0; a3 < q; ++a3) {
            const RationalCenter c{q, 1 % q, 0, a3};
            if (c.content() != 1) continue;
            const i64 X = 1000;
            const cplx f = weyl_sum_f(c, X);
            CHECK(std::abs(f - arc_approximant_V_offset(c, {0, 0, 0}, X)) <= q + 1e-6);
        }
}

TEST_CASE("grid Fourier coefficient equals the count") {
    CHECK(grid_fourier_coefficient(1, 2, {1, 3, 7}, {5, 9, 17}) == Approx(1.0).epsilon(1e-9));
    CHECK(grid_fourier_coefficient(1, 1, {0, 0, 0}, {3, 3, 3}) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(grid_fourier_coefficient(2, 3, {0, 0, 0}, {13, 37, 109}) -
                   static_cast<double>(count_naive(2, 3, {0, 0, 0}).value)) < 1e-6);
    CHECK_THROWS_AS(grid_fourier_coefficient(2, 3, {0, 0, 0}, {12, 37, 109}), ConfigError);
}

TEST_CASE("psi") {
    CHECK(psi(0.0, 10) == Approx(1.0));
    CHECK(psi(0.5, 10) == Approx(0.5));
    CHECK(psi(1.0 / std::sqrt(2.0) - 0.5, 10) == 0.0);  // far from every q <= 10 centre
    // Inside M(2,1): 1 / (2 + X^3 |2 a - 1|).
    CHECK(psi(0.5 + 2e-4, 10) == Approx(1.0 / (2.0 + 1000.0 * 4e-4)));
}

TEST_CASE("frac_mul keeps precision for large multipliers") {
    CHECK(frac_mul(0.5, 1'000'000'000'001) == Approx(0.5));
    CHECK(frac(-0.25) == Approx(0.75));
    std::mt19937_64 eng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(eng);
        const i64 n = static_cast<i64>(eng() % 1'000'000'000'000ULL);
        const long double ref = std::fmod(static_cast<long double>(a) * n, 1.0L);
        const double d = std::abs(frac_mul(a, n) - static_cast<double>(ref));
        CHECK(std::min(d, 1.0 - d) < 1e-6);
    }
}
