#include "cubicvs/arcs.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "cubicvs/parallel.hpp"

namespace cubicvs {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

double cube(double v) { return v * v * v; }

double power(i64 X, int j) { return std::pow(static_cast<double>(X), j); }

i64 floor_cutoff(double v) { return static_cast<i64>(std::floor(v)); }

std::mt19937_64 sample_engine(std::uint64_t seed, std::size_t index) {
    return std::mt19937_64(splitmix64(seed + kGolden * static_cast<std::uint64_t>(index)));
}

}  // namespace

ArcPoint ArcPoint::from_phase(const PhasePoint& alpha) {
    ArcPoint p;
    const PhasePoint r = alpha.reduced();
    p.offset = {r.a1, r.a2, r.a3};
    return p;
}

ArcPoint ArcPoint::from_center(const RationalCenter& center, const PhasePoint& offset) {
    if (center.q < 1) throw std::invalid_argument("denominator must be positive");
    ArcPoint p;
    p.den = center.q;
    p.num = {mod_floor(center.a1, center.q), mod_floor(center.a2, center.q),
             mod_floor(center.a3, center.q)};
    p.offset = {offset.a1, offset.a2, offset.a3};
    return p;
}

double ArcPoint::coordinate(int j) const {
    return frac(static_cast<double>(mod_floor(num[j], den)) / static_cast<double>(den) +
                offset[j]);
}

bool ArcPoint::within(int j, i64 q, i64 a, double bound) const {
    const i128 exact = static_cast<i128>(q) * num[j] - static_cast<i128>(a) * den;
    const double off = offset[j];
    if (off == 0.0) {
        const long double lhs = static_cast<long double>(exact < 0 ? -exact : exact);
        return lhs <= static_cast<long double>(bound) * static_cast<long double>(den);
    }
    const double qd = static_cast<double>(q);
    const double p = qd * off;
    const double e = std::fma(qd, off, -p);
    const long double dev = static_cast<long double>(exact) / static_cast<long double>(den) +
                            static_cast<long double>(p) + static_cast<long double>(e);
    return std::fabs(dev) <= static_cast<long double>(bound) * (1.0L + kArcSlack);
}

std::vector<std::pair<i64, i64>> convergents(double alpha, i64 max_den) {
    std::vector<std::pair<i64, i64>> out;
    alpha = frac(alpha);
    // alpha as an exact-enough dyadic fraction N / 2^64.
    u128 num = static_cast<u128>(std::ldexp(static_cast<long double>(alpha), 64));
    u128 den = u128{1} << 64;
    u128 h2 = 0, h1 = 1, k2 = 1, k1 = 0;
    while (true) {
        const u128 a = num / den;
        const u128 rem = num % den;
        if (k1 != 0 && a > static_cast<u128>(max_den)) break;
        const u128 h = a * h1 + h2;
        const u128 k = a * k1 + k2;
        if (k > static_cast<u128>(max_den)) break;
        out.emplace_back(static_cast<i64>(h), static_cast<i64>(k));
        if (rem == 0) break;
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        num = den;
        den = rem;
    }
    return out;
}

OneDimLabel classify_one_dim(const ArcPoint& alpha, int coord, double Q, i64 X) {
    if (X < 1 || !(Q >= 1.0)) throw std::invalid_argument("need Q >= 1 and X >= 1");
    OneDimLabel out;
    out.Q = Q;
    out.X = X;
    const double delta = Q / cube(static_cast<double>(X));
    const i64 qmax = floor_cutoff(Q);
    const double value = alpha.coordinate(coord);
    auto accept = [&](i64 q, i64 a) {
        if (a < 0 || a > q || std::gcd(a, q) != 1) return false;
        if (!alpha.within(coord, q, a, delta)) return false;
        out.major = true;
        out.q = q;
        out.a = a;
        return true;
    };
    if (2.0 * Q * Q < cube(static_cast<double>(X))) {
        for (const auto& [a, q] : convergents(value, qmax))
            if (accept(q, a)) return out;
        return out;
    }
    for (i64 q = 1; q <= qmax; ++q) {
        const double centre = static_cast<double>(q) * value;
        const i64 lo = std::max<i64>(0, static_cast<i64>(std::floor(centre - delta)) - 1);
        const i64 hi = std::min<i64>(q, static_cast<i64>(std::ceil(centre + delta)) + 1);
        for (i64 a = lo; a <= hi; ++a)
            if (accept(q, a)) return out;
    }
    return out;
}

OneDimLabel classify_one_dim(double alpha, double Q, i64 X) {
    return classify_one_dim(ArcPoint::from_phase({0.0, 0.0, alpha}), 2, Q, X);
}

OneDimLabel classify_one_dim_exhaustive(double alpha, double Q, i64 X) {
    OneDimLabel out;
    out.Q = Q;
    out.X = X;
    const ArcPoint p = ArcPoint::from_phase({0.0, 0.0, alpha});
    const double delta = Q / cube(static_cast<double>(X));
    for (i64 q = 1; q <= floor_cutoff(Q); ++q) {
        for (i64 a = 0; a <= q; ++a) {
            if (std::gcd(a, q) == 1 && p.within(2, q, a, delta)) {
                out.major = true;
                out.q = q;
                out.a = a;
                return out;
            }
        }
    }
    return out;
}

BoxLabel classify_box(const ArcPoint& alpha, double Z, i64 X) {
    if (X < 1 || !(Z >= 1.0)) throw std::invalid_argument("need Z >= 1 and X >= 1");
    BoxLabel out;
    out.Z = Z;
    out.X = X;
    const i64 qmax = floor_cutoff(Z);
    std::array<std::vector<i64>, 3> candidates;
    for (i64 q = 1; q <= qmax; ++q) {
        bool empty = false;
        for (int j = 0; j < 3 && !empty; ++j) {
            const double bound = static_cast<double>(q) * Z / power(X, j + 1);
            const double centre = static_cast<double>(q) * alpha.coordinate(j);
            const i64 lo = std::max<i64>(0, static_cast<i64>(std::floor(centre - bound)) - 1);
            const i64 hi = std::min<i64>(q, static_cast<i64>(std::ceil(centre + bound)) + 1);
            candidates[j].clear();
            for (i64 a = lo; a <= hi; ++a)
                if (alpha.within(j, q, a, bound)) candidates[j].push_back(a);
            empty = candidates[j].empty();
        }
        if (empty) continue;
        for (i64 a1 : candidates[0])
            for (i64 a2 : candidates[1])
                for (i64 a3 : candidates[2]) {
                    const RationalCenter c{q, a1, a2, a3};
                    if (c.content() != 1) continue;
                    out.major = true;
                    out.center = c;
                    return out;
                }
    }
    return out;
}

BoxLabel classify_box(const PhasePoint& alpha, double Z, i64 X) {
    return classify_box(ArcPoint::from_phase(alpha), Z, X);
}

std::string to_string(WLabel w) { return "W" + std::to_string(static_cast<int>(w)); }

int PartitionDetail::memberships() const {
    const bool minor = !major_1d.major;
    int n = 0;
    n += minor ? 1 : 0;
    n += (!minor && !in_N.major) ? 1 : 0;
    n += (!minor && in_N.major && !in_P.major) ? 1 : 0;
    n += in_P.major ? 1 : 0;
    return n;
}

double partition_L(i64 X) { return std::pow(static_cast<double>(X), 1.0 / 72.0); }
double partition_Q(i64 X) { return cube(partition_L(X)); }

PartitionDetail partition_detail(const ArcPoint& alpha, i64 X) {
    if (X < 2) throw std::invalid_argument("partition needs X >= 2");
    PartitionDetail d;
    d.L = partition_L(X);
    d.Q = cube(d.L);
    d.major_1d = classify_one_dim(alpha, 2, d.Q, X);
    d.in_N = classify_box(alpha, d.Q * d.Q, X);
    d.in_P = classify_box(alpha, d.L, X);
    if (d.in_P.major)
        d.label = WLabel::W4;
    else if (!d.major_1d.major)
        d.label = WLabel::W1;
    else if (!d.in_N.major)
        d.label = WLabel::W2;
    else
        d.label = WLabel::W3;
    return d;
}

WLabel partition_label(const PhasePoint& alpha, i64 X) {
    return partition_detail(ArcPoint::from_phase(alpha), X).label;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1p-53; }

DissectionReport dissect_samples(i64 X, std::size_t samples, std::uint64_t seed) {
    const double L = partition_L(X);
    const double Q = partition_Q(X);
    std::vector<PartitionDetail> detail(samples);
    parallel_blocks(samples, [&](std::size_t i) {
        auto eng = sample_engine(seed, i);
        RationalCenter c;
        PhasePoint off;
        if (i % 2 == 0) {
            off = {unit_from_bits(eng()), unit_from_bits(eng()), unit_from_bits(eng())};
        } else {
            c.q = 1 + static_cast<i64>(eng() % 3);
            c.a1 = static_cast<i64>(eng() % static_cast<u64>(c.q));
            c.a2 = static_cast<i64>(eng() % static_cast<u64>(c.q));
            c.a3 = static_cast<i64>(eng() % static_cast<u64>(c.q));
            const double scales[4] = {0.5 * L, 2.0 * L, Q * Q, 3.0 * Q * Q};
            const double sc = scales[eng() % 4];
            double x = 1.0;
            double o[3];
            for (double& v : o) {
                x *= static_cast<double>(X);
                v = (2.0 * unit_from_bits(eng()) - 1.0) * sc / x;
            }
            off = {o[0], o[1], o[2]};
        }
        detail[i] = partition_detail(ArcPoint::from_center(c, off), X);
    });
    DissectionReport r;
    r.X = X;
    r.samples = samples;
    for (const auto& d : detail) {
        ++r.histogram[static_cast<std::size_t>(d.label) - 1];
        if (d.memberships() != 1) ++r.not_partitioned;
        if (!d.p_inside_major()) ++r.p_outside_major;
    }
    return r;
}

WeylProbeReport weyl_probe(i64 X, double Q, std::size_t samples, std::uint64_t seed) {
    if (X < 1 || !(Q >= 1.0)) throw std::invalid_argument("need Q >= 1 and X >= 1");
    WeylProbeReport rep;
    rep.X = X;
    rep.Q = Q;
    rep.samples = samples;
    std::vector<double> value(samples, -1.0);
    std::vector<PhasePoint> where(samples);
    parallel_blocks(samples, [&](std::size_t i) {
        auto eng = sample_engine(seed, i);
        ArcPoint p;
        RationalCenter c;
        PhasePoint off;
        if (i % 2 == 0) {
            off = {unit_from_bits(eng()), unit_from_bits(eng()), unit_from_bits(eng())};
        } else {
            c.q = 1 + static_cast<i64>(eng() % 24);
            c.a1 = static_cast<i64>(eng() % static_cast<std::uint64_t>(c.q));
            c.a2 = static_cast<i64>(eng() % static_cast<std::uint64_t>(c.q));
            c.a3 = static_cast<i64>(eng() % static_cast<std::uint64_t>(c.q));
            const double scale = 8.0 * unit_from_bits(eng());
            off = {(2.0 * unit_from_bits(eng()) - 1.0) * scale / power(2 * X, 1),
                   (2.0 * unit_from_bits(eng()) - 1.0) * scale / power(2 * X, 2),
                   (2.0 * unit_from_bits(eng()) - 1.0) * scale / power(2 * X, 3)};
        }
        p = ArcPoint::from_center(c, off);
        if (classify_one_dim(p, 2, Q, X).major) return;
        value[i] = std::abs(weyl_sum_f(c, off, 2 * X));
        where[i] = p.phase();
    });
    for (std::size_t i = 0; i < samples; ++i) {
        if (value[i] < 0.0) continue;
        ++rep.kept;
        if (value[i] > rep.max_abs) {
            rep.max_abs = value[i];
            rep.argmax = where[i];
        }
    }
    rep.ratio = rep.max_abs / (static_cast<double>(X) * std::pow(Q, -0.25));
    return rep;
}

MajorArcProbeReport major_arc_error_probe(i64 X, std::size_t samples, std::uint64_t seed) {
    if (X < 2) throw std::invalid_argument("probe needs X >= 2");
    MajorArcProbeReport rep;
    rep.X = X;
    rep.L = partition_L(X);
    rep.samples = samples;
    std::vector<RationalCenter> centers;
    for (i64 q = 1; q <= floor_cutoff(rep.L); ++q)
        for (i64 a1 = 0; a1 < q; ++a1)
            for (i64 a2 = 0; a2 < q; ++a2)
                for (i64 a3 = 0; a3 < q; ++a3) {
                    const RationalCenter c{q, a1, a2, a3};
                    if (c.content() == 1) centers.push_back(c);
                }
    rep.centers = centers.size();
    std::vector<double> error(samples, 0.0);
    parallel_blocks(samples, [&](std::size_t i) {
        auto eng = sample_engine(seed, i);
        const RationalCenter c = centers[eng() % centers.size()];
        PhasePoint off;
        if (i != 0) {
            off = {(2.0 * unit_from_bits(eng()) - 1.0) * rep.L / power(X, 1),
                   (2.0 * unit_from_bits(eng()) - 1.0) * rep.L / power(X, 2),
                   (2.0 * unit_from_bits(eng()) - 1.0) * rep.L / power(X, 3)};
        }
        const cplx f = weyl_sum_f(c, off, X);
        const cplx V = arc_approximant_V_offset(c, off, X, 1e-8);
        error[i] = std::abs(f - V);
    });
    for (double e : error) rep.max_error = std::max(rep.max_error, e);
    rep.normalized = rep.max_error / (rep.L * rep.L);
    return rep;
}

}  // namespace cubicvs
