#include <cmath>
#include <numeric>
#include <random>

#include "cubicvs/arcs.hpp"
#include "doctest.h"

using namespace cubicvs;

namespace {

// Direct scan of the box definition, smallest q then lexicographically smallest a.
BoxLabel box_reference(const PhasePoint& alpha, double Z, i64 X) {
    BoxLabel out;
    for (i64 q = 1; q <= static_cast<i64>(std::floor(Z)); ++q)
        for (i64 a1 = 0; a1 <= q; ++a1)
            for (i64 a2 = 0; a2 <= q; ++a2)
                for (i64 a3 = 0; a3 <= q; ++a3) {
                    if (std::gcd(std::gcd(q, a1), std::gcd(a2, a3)) != 1) continue;
                    const i64 a[3] = {a1, a2, a3};
                    bool ok = true;
                    double xj = 1.0;
                    for (int j = 0; j < 3 && ok; ++j) {
                        xj *= static_cast<double>(X);
                        ok = std::abs(alpha[j] - static_cast<double>(a[j]) / static_cast<double>(q)) <= Z / xj;
                    }
                    if (ok) {
                        out.major = true;
                        out.center = {q, a1, a2, a3};
                        return out;
                    }
                }
    return out;
}

}  // namespace

TEST_CASE("classify_one_dim examples") {
    const auto zero = classify_one_dim(0.0, 5, 100);
    CHECK(zero.major);
    CHECK(zero.q == 1);
    CHECK(zero.a == 0);
    const auto half = classify_one_dim(0.5, 5, 100);
    CHECK(half.major);
    CHECK(half.q == 2);
    CHECK(half.a == 1);
}

TEST_CASE("one-dimensional boundary cases") {
    // M(2,1) at Q = 2, X = 100 is |2 alpha - 1| <= 2e-6.
    const RationalCenter half{2, 1, 1, 1};
    CHECK(classify_one_dim(ArcPoint::from_center(half, {0, 0, 1.5e-6}), 2, 2, 100).major == false);
    CHECK(classify_one_dim(0.5 + 1.5e-6, 2, 100).major == false);
    // Exactly on the boundary counts as inside.
    const auto edge = classify_one_dim(ArcPoint::from_center(half, {0, 0, 1e-6}), 2, 2, 100);
    CHECK(edge.major);
    CHECK(edge.q == 2);
    CHECK(classify_one_dim(ArcPoint::from_center(half, {0, 0, -1e-6}), 2, 2, 100).major);
}

TEST_CASE("classify_one_dim agrees with the exhaustive scan for Q <= 50") {
    std::mt19937_64 eng(17);
    std::size_t majors = 0;
    for (int Q : {1, 2, 4, 7, 12, 25, 50})
        for (i64 X : {i64{Q}, i64{60}, i64{400}}) {
            if (X < Q) continue;
            for (int i = 0; i < 2000; ++i) {
                double alpha = i / 2000.0;
                if (i % 2) {
                    // Near a random centre, on the scale of the arc width.
                    const i64 q = 1 + static_cast<i64>(eng() % static_cast<u64>(Q));
                    const i64 a = static_cast<i64>(eng() % static_cast<u64>(q));
                    const double w = Q / std::pow(static_cast<double>(X), 3) / static_cast<double>(q);
                    alpha = static_cast<double>(a) / static_cast<double>(q) + (2.0 * unit_from_bits(eng()) - 1.0) * 1.5 * w;
                    alpha -= std::floor(alpha);
                }
                const auto fast = classify_one_dim(alpha, Q, X);
                const auto slow = classify_one_dim_exhaustive(alpha, Q, X);
                CHECK(fast.major == slow.major);
                CHECK(fast.q == slow.q);
                CHECK(fast.a == slow.a);
                majors += fast.major;
            }
        }
    CHECK(majors > 1000);
}

TEST_CASE("convergents of a rational stop at it") {
    const auto c = convergents(13.0 / 29.0, 1000);
    REQUIRE(!c.empty());
    CHECK(c.back() == std::pair<i64, i64>{13, 29});
}

TEST_CASE("classify_box examples") {
    const auto z = classify_box(PhasePoint{0, 0, 0}, 3.0, 1000);
    CHECK(z.major);
    CHECK(z.center.q == 1);
    CHECK(z.center.a1 == 0);

    const auto exact = classify_box(ArcPoint::from_center({30, 15, 10, 6}), 30.0, 1'000'000);
    CHECK(exact.major);
    CHECK(exact.center.q == 30);
    CHECK(exact.center.a1 == 15);
    CHECK(exact.center.a2 == 10);
    CHECK(exact.center.a3 == 6);
    const auto approx = classify_box(PhasePoint{0.5, 1.0 / 3.0, 0.2}, 31.5, 1'000'000);
    CHECK(approx.major);
    CHECK(approx.center.q == 30);

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const i64 X = 1'000'000;
    const PhasePoint golden{phi - 1.0, 2.0 * phi - 3.0, 3.0 * phi - 4.0};
    const double Z = std::pow(static_cast<double>(X), 1.0 / 72.0);
    CHECK_FALSE(classify_box(golden, Z, X).major);
    CHECK_FALSE(box_reference(golden, Z, X).major);
}

TEST_CASE("classify_box agrees with a direct scan") {
    std::mt19937_64 eng(23);
    for (int i = 0; i < 3000; ++i) {
        const double Z = 1.0 + 9.0 * unit_from_bits(eng());
        const i64 X = 20 + static_cast<i64>(eng() % 200);
        PhasePoint a{unit_from_bits(eng()), unit_from_bits(eng()), unit_from_bits(eng())};
        if (i % 2) {
            const i64 q = 1 + static_cast<i64>(eng() % 9);
            double xj = 1.0;
            double v[3];
            for (double& c : v) {
                xj *= static_cast<double>(X);
                c = static_cast<double>(eng() % static_cast<u64>(q)) / static_cast<double>(q) +
                    (2.0 * unit_from_bits(eng()) - 1.0) * 1.3 * Z / xj;
                c -= std::floor(c);
            }
            a = {v[0], v[1], v[2]};
        }
        const auto fast = classify_box(a, Z, X);
        const auto slow = box_reference(a, Z, X);
        CHECK(fast.major == slow.major);
        if (fast.major && slow.major) CHECK(fast.center.q == slow.center.q);
    }
}

TEST_CASE("partition_label examples") {
    const i64 X = 1'000'000;
    CHECK(partition_label({0, 0, 0}, X) == WLabel::W4);
    const double minor3 = std::sqrt(2.0) - 1.0;
    REQUIRE_FALSE(classify_one_dim(minor3, partition_Q(X), X).major);
    CHECK(partition_label({0, 0, minor3}, X) == WLabel::W1);
    CHECK(partition_L(X) == doctest::Approx(std::pow(1e6, 1.0 / 72.0)));
    CHECK(partition_Q(X) == doctest::Approx(std::pow(partition_L(X), 3)));
}

TEST_CASE("W-labels partition a seeded sample and P sits inside the major arcs") {
    const DissectionReport d = dissect_samples(1'000'000, 20'000, 99);
    CHECK(d.not_partitioned == 0);
    CHECK(d.p_outside_major == 0);
    std::size_t total = 0;
    for (auto c : d.histogram) {
        CHECK(c > 0);
        total += c;
    }
    CHECK(total == 20'000);
}

TEST_CASE("labels are stable under integer translation") {
    std::mt19937_64 eng(31);
    for (int i = 0; i < 500; ++i) {
        const PhasePoint a{unit_from_bits(eng()), unit_from_bits(eng()), 0.5 + 1e-19 * static_cast<double>(i)};
        const PhasePoint b{a.a1 + 3.0, a.a2 - 2.0, a.a3 + 1.0};
        CHECK(partition_label(a, 1000) == partition_label(b, 1000));
        CHECK(classify_box(a, 2.0, 50).major == classify_box(b, 2.0, 50).major);
    }
}

TEST_CASE("weyl_probe") {
    const auto empty = weyl_probe(1000, 2.0, 0, 1);
    CHECK(empty.kept == 0);
    CHECK(empty.max_abs == 0.0);

    const auto r = weyl_probe(1000, partition_Q(1000), 64, 5);
    CHECK(r.kept > 0);
    CHECK(r.kept <= 64);
    CHECK(r.max_abs <= 2000.0);
    // The maximizing point is minor.
    CHECK_FALSE(classify_one_dim(r.argmax.a3, r.Q, 1000).major);
    // Same seed, same report.
    const auto again = weyl_probe(1000, partition_Q(1000), 64, 5);
    CHECK(again.max_abs == r.max_abs);
}

TEST_CASE("major_arc_error_probe") {
    const auto r = major_arc_error_probe(1000, 64, 3);
    CHECK(r.centers >= 1);
    CHECK(r.max_error >= 0.0);
    CHECK(r.normalized == doctest::Approx(r.max_error / (r.L * r.L)));
    CHECK(r.max_error <= 2.0 * r.L * r.L);
}
