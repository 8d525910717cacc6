#pragma once

// Major/minor arc dissections: one-dimensional arcs M(q,a) at cutoff Q, the
// three-dimensional boxes K(q,a;Z), the four-way partition W1..W4, and the
// numerical probes of the Weyl bound and the major-arc approximation.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cubicvs/core.hpp"
#include "cubicvs/expsum.hpp"

namespace cubicvs {

// A phase point written as num/den + offset per coordinate. With zero offsets the
// point is an exact rational and arc inequalities are decided exactly; otherwise
// they are decided in floating point with a relative slack of 1e-12 on the bound.
struct ArcPoint {
    i64 den = 1;
    std::array<i64, 3> num{0, 0, 0};
    std::array<double, 3> offset{0.0, 0.0, 0.0};

    static ArcPoint from_phase(const PhasePoint& alpha);
    static ArcPoint from_center(const RationalCenter& center, const PhasePoint& offset = {});
    // Coordinate j reduced to [0, 1) as a double.
    double coordinate(int j) const;
    PhasePoint phase() const { return {coordinate(0), coordinate(1), coordinate(2)}; }

    // Whether |q * alpha_j - a| <= bound.
    bool within(int j, i64 q, i64 a, double bound) const;
};

inline constexpr double kArcSlack = 1e-12;

struct OneDimLabel {
    bool major = false;
    i64 q = 0;
    i64 a = 0;
    double Q = 0.0;
    i64 X = 0;
};

// M(q,a) = { |q alpha - a| <= Q X^-3 } with 0 <= a <= q <= Q, gcd(a, q) = 1.
// Centers come from continued-fraction convergents when 2 Q^2 < X^3, which then
// contain every qualifying center; otherwise from a scan over q. Smallest q wins.
OneDimLabel classify_one_dim(const ArcPoint& alpha, int coord, double Q, i64 X);
OneDimLabel classify_one_dim(double alpha, double Q, i64 X);
// Brute force over all q <= Q and 0 <= a <= q; reference for tests.
OneDimLabel classify_one_dim_exhaustive(double alpha, double Q, i64 X);

// Continued-fraction convergents (p, q) of alpha in [0,1) with q <= max_den.
std::vector<std::pair<i64, i64>> convergents(double alpha, i64 max_den);

struct BoxLabel {
    bool major = false;
    RationalCenter center;
    double Z = 0.0;
    i64 X = 0;
};

// K(q,a;Z): 1 <= q <= Z, 0 <= a_j <= q, gcd(q,a) = 1, |alpha_j - a_j/q| <= Z X^-j.
// Smallest q, then lexicographically smallest a.
BoxLabel classify_box(const ArcPoint& alpha, double Z, i64 X);
BoxLabel classify_box(const PhasePoint& alpha, double Z, i64 X);

enum class WLabel { W1 = 1, W2 = 2, W3 = 3, W4 = 4 };
std::string to_string(WLabel w);

struct PartitionDetail {
    WLabel label = WLabel::W1;
    double L = 0.0;
    double Q = 0.0;
    OneDimLabel major_1d;  // alpha3 at cutoff Q
    BoxLabel in_N;         // K(Q^2)
    BoxLabel in_P;         // K(L)
    // How many of the four defining predicates hold; 1 for a genuine partition.
    int memberships() const;
    // P is contained in [0,1)^2 x M at this point.
    bool p_inside_major() const { return !in_P.major || major_1d.major; }
};

// L = X^(1/72), Q = L^3. W1: alpha3 minor; W2: alpha3 major, outside K(Q^2);
// W3: alpha3 major, inside K(Q^2) but outside K(L); W4: inside K(L).
PartitionDetail partition_detail(const ArcPoint& alpha, i64 X);
WLabel partition_label(const PhasePoint& alpha, i64 X);

double partition_L(i64 X);
double partition_Q(i64 X);

struct DissectionReport {
    i64 X = 0;
    std::size_t samples = 0;
    std::array<std::size_t, 4> histogram{};  // W1..W4
    std::size_t not_partitioned = 0;
    std::size_t p_outside_major = 0;
};

// Seeded points, half uniform in [0,1)^3 and half near centres with q <= 3 at
// offsets straddling the L and Q^2 box sizes.
DissectionReport dissect_samples(i64 X, std::size_t samples, std::uint64_t seed);

// splitmix64 step, used to derive per-sample seeds.
std::uint64_t splitmix64(std::uint64_t x);
// Uniform double in [0, 1) from 53 random bits.
double unit_from_bits(std::uint64_t bits);

struct WeylProbeReport {
    i64 X = 0;
    double Q = 0.0;
    std::size_t samples = 0;
    std::size_t kept = 0;
    double max_abs = 0.0;
    double ratio = 0.0;  // max_abs / (X Q^(-1/4))
    PhasePoint argmax;
};

// Samples alpha (half uniform, half close to rationals of denominator <= 24),
// keeps those whose alpha3 is minor at cutoff Q, and records sup |f(alpha; 2X)|.
WeylProbeReport weyl_probe(i64 X, double Q, std::size_t samples, std::uint64_t seed);

struct MajorArcProbeReport {
    i64 X = 0;
    double L = 0.0;
    std::size_t samples = 0;
    std::size_t centers = 0;
    double max_error = 0.0;
    double normalized = 0.0;  // max_error / L^2
};

// Samples alpha inside the boxes P(q,a) = K(q,a;L), q <= L, and records
// sup |f(alpha;X) - V(alpha)|.
MajorArcProbeReport major_arc_error_probe(i64 X, std::size_t samples, std::uint64_t seed);

}  // namespace cubicvs
