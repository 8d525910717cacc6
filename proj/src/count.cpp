#include "cubicvs/count.hpp"

#include <algorithm>
#include <array>
#include <chrono>

#include "cubicvs/parallel.hpp"
#include "cubicvs/table_cache.hpp"

namespace cubicvs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

u64 factorial(int n) {
    u64 f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<u64>(i);
    return f;
}

// Depth-first walk over non-increasing sequences v1 >= v2 >= ... >= vs in [lo, hi],
// carrying the running key sum(weights[v]) and prod(run length)! so the leaf knows
// how many ordered tuples share the multiset.
struct WeightedWalk {
    i64 lo;
    std::span<const u64> weights;  // indexed by v - lo
    u64 s_factorial;

    template <class Visit>
    void descend(int remaining, i64 maxv, u64 acc, u64 denom, int run, i64 last,
                 Visit& visit) const {
        if (remaining == 1) {
            for (i64 v = lo; v <= maxv; ++v) {
                const u64 d = v == last ? denom * static_cast<u64>(run + 1) : denom;
                visit(acc + weights[static_cast<std::size_t>(v - lo)], s_factorial / d);
            }
            return;
        }
        for (i64 v = lo; v <= maxv; ++v) {
            const int r = v == last ? run + 1 : 1;
            descend(remaining - 1, v, acc + weights[static_cast<std::size_t>(v - lo)],
                    denom * static_cast<u64>(r), r, v, visit);
        }
    }

    // All sequences whose largest element is `top`.
    template <class Visit>
    void walk_top(int s, i64 top, Visit& visit) const {
        const u64 w = weights[static_cast<std::size_t>(top - lo)];
        if (s == 1) {
            visit(w, s_factorial);
            return;
        }
        descend(s - 1, top, w, 1, 1, top, visit);
    }
};

FlatCountTable build_linear_table(int s, i64 lo, i64 hi, const std::vector<u64>& weights,
                                  u64 shift, const CountLimits& limits) {
    const u64 multisets = multiset_count(s, hi - lo + 1);
    if (multisets > limits.table_multisets)
        throw BudgetExceeded("table build needs " + std::to_string(multisets) +
                             " multisets, above the budget of " +
                             std::to_string(limits.table_multisets));
    const WeightedWalk walk{lo, weights, factorial(s)};
    const std::size_t tops = static_cast<std::size_t>(hi - lo + 1);
    const std::size_t guess = static_cast<std::size_t>(std::min<u64>(multisets, 1u << 22));

    if (thread_count() <= 1 || tops < 4) {
        FlatCountTable table(guess);
        auto visit = [&](u64 key, u64 mult) { table.add(key - shift, mult); };
        for (i64 top = lo; top <= hi; ++top) walk.walk_top(s, top, visit);
        return table;
    }
    // Partition by the largest element; integer merging is order independent.
    std::vector<FlatCountTable> parts(tops);
    parallel_blocks(tops, [&](std::size_t b) {
        FlatCountTable part;
        auto visit = [&](u64 key, u64 mult) { part.add(key - shift, mult); };
        walk.walk_top(s, lo + static_cast<i64>(b), visit);
        parts[b] = std::move(part);
    });
    FlatCountTable table(guess);
    for (const auto& p : parts) table.merge(p);
    return table;
}

void check_range(int s, i64 lo, i64 hi) {
    if (s < 1 || s > kMaxPairs) throw ConfigError("s must lie in [1, " + std::to_string(kMaxPairs) + "]");
    if (lo < 1 || hi < lo) throw ConfigError("entry range must satisfy 1 <= lo <= hi");
}

// Packs signed linear keys (K_1, ..., K_d) with known bounds into one word.
class SignedPacker {
public:
    void add_axis(i128 min, i128 max) {
        const i128 radix = max - min + 1;
        mins_.push_back(min);
        strides_.push_back(static_cast<u64>(span_));
        span_ *= radix;
        if (span_ > static_cast<i128>(FlatCountTable::kEmpty))
            throw BudgetExceeded("mixed-system key space exceeds 64 bits");
    }
    // Wrapped contribution of one element with axis values k.
    u64 weight(std::span<const i128> k) const {
        u64 w = 0;
        for (std::size_t j = 0; j < k.size(); ++j)
            w += static_cast<u64>(k[j]) * strides_[j];
        return w;
    }
    u64 shift() const {
        u64 sh = 0;
        for (std::size_t j = 0; j < mins_.size(); ++j) sh += static_cast<u64>(mins_[j]) * strides_[j];
        return sh;
    }

private:
    std::vector<i128> mins_;
    std::vector<u64> strides_;
    i128 span_ = 1;
};

u64 sum_of_squares(const FlatCountTable& t) {
    u64 total = 0;
    t.for_each([&](u64, u64 c) { total += c * c; });
    return total;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

}  // namespace

RepresentationTable::RepresentationTable(int s, i64 lo, i64 hi, FlatCountTable entries)
    : codec_(s, lo, hi), entries_(std::move(entries)) {}

u64 RepresentationTable::multiplicity(const MomentVector& m) const {
    for (int j = 0; j < 3; ++j)
        if (m[j] < codec_.min()[j] || m[j] > codec_.max()[j]) return 0;
    return entries_.find(codec_.pack(m));
}

u64 multiset_count(int s, i64 width) {
    // C(width + s - 1, s), saturating at UINT64_MAX.
    u128 c = 1;
    for (int i = 1; i <= s; ++i) {
        c = c * static_cast<u128>(width + i - 1) / static_cast<u128>(i);
        if (c > FlatCountTable::kEmpty) return FlatCountTable::kEmpty;
    }
    return static_cast<u64>(c);
}

RepresentationTable build_representation_table(int s, i64 X, const CountLimits& limits) {
    validate_params({s, X});
    return build_representation_table(s, 1, X, limits);
}

RepresentationTable build_representation_table(int s, i64 lo, i64 hi, const CountLimits& limits) {
    check_range(s, lo, hi);
    KeyCodec codec;
    try {
        codec = KeyCodec(s, lo, hi);
    } catch (const OverflowError& e) {
        throw ConfigError(std::string("moment range exceeds the key encoding: ") + e.what());
    }
    std::vector<u64> weights;
    weights.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (i64 v = lo; v <= hi; ++v) weights.push_back(codec.element_weight(v));
    auto entries = build_linear_table(s, lo, hi, weights, codec.base_shift(), limits);
    return RepresentationTable(s, lo, hi, std::move(entries));
}

void for_each_multiset(int s, i64 lo, i64 hi,
                       const std::function<void(std::span<const i64>, u64)>& visit) {
    check_range(s, lo, hi);
    const u64 s_fact = factorial(s);
    std::vector<i64> t(static_cast<std::size_t>(s), lo);
    while (true) {
        u64 denom = 1;
        int run = 1;
        for (int i = 1; i < s; ++i) {
            run = t[i] == t[i - 1] ? run + 1 : 1;
            denom *= static_cast<u64>(run);
        }
        visit(t, s_fact / denom);
        int i = s - 1;
        while (i >= 0 && t[i] == hi) --i;
        if (i < 0) break;
        const i64 v = t[i] + 1;
        for (int k = i; k < s; ++k) t[k] = v;
    }
}

u64 pair_count(const RepresentationTable& a, const RepresentationTable& b, const Offset& h) {
    if (a.s() != b.s()) throw std::invalid_argument("pair_count: tables differ in s");
    u64 total = 0;
    const KeyCodec& ca = a.codec();
    const KeyCodec& cb = b.codec();
    a.entries().for_each([&](u64 key, u64 mult) {
        const MomentVector m = ca.unpack(key);
        if (auto other = cb.pack_difference(m, h)) total += mult * b.entries().find(*other);
    });
    return total;
}

CountResult count_solutions(const RepresentationTable& table, const Offset& h) {
    const auto t0 = Clock::now();
    CountResult r;
    r.params = {table.s(), table.hi()};
    r.h = h;
    r.value = pair_count(table, table, h);
    r.method = "table-pairing";
    r.elapsed = seconds_since(t0);
    return r;
}

CountResult count_solutions(int s, i64 X, const Offset& h, const CountOptions& options) {
    validate_params({s, X});
    const auto t0 = Clock::now();
    std::string method = "table-pairing";
    std::optional<RepresentationTable> table;
    if (options.cache) {
        table = options.cache->load(s, X);
        if (table) method = "table-pairing(cached)";
    }
    if (!table) {
        table = build_representation_table(s, X, options.limits);
        if (options.cache) options.cache->store(*table);
    }
    CountResult r = count_solutions(*table, h);
    r.method = method;
    r.elapsed = seconds_since(t0);
    return r;
}

CountResult count_naive(int s, i64 X, const Offset& h, const CountLimits& limits) {
    validate_params({s, X});
    const auto t0 = Clock::now();
    const u64 iterations = checked_pow(static_cast<u64>(X), 2 * s);
    if (iterations > limits.naive_iterations)
        throw BudgetExceeded("naive enumeration needs " + std::to_string(iterations) +
                             " iterations, above the budget of " +
                             std::to_string(limits.naive_iterations));
    const int n = 2 * s;
    std::vector<i64> digit(static_cast<std::size_t>(n), 1);
    // Running differences sum(x^j) - sum(y^j); x occupies the first s digits.
    i128 d[3] = {0, 0, 0};
    u64 hits = 0;
    auto contribution = [&](int pos, i64 v, int j) -> i128 {
        i128 p = v;
        for (int e = 0; e < j; ++e) p *= v;
        return pos < s ? p : -p;
    };
    while (true) {
        if (d[0] == h.h1 && d[1] == h.h2 && d[2] == h.h3) ++hits;
        int pos = n - 1;
        while (pos >= 0 && digit[pos] == X) {
            for (int j = 0; j < 3; ++j) d[j] += contribution(pos, 1, j) - contribution(pos, X, j);
            digit[pos] = 1;
            --pos;
        }
        if (pos < 0) break;
        const i64 old = digit[pos];
        for (int j = 0; j < 3; ++j) d[j] += contribution(pos, old + 1, j) - contribution(pos, old, j);
        digit[pos] = old + 1;
    }
    CountResult r;
    r.value = hits;
    r.params = {s, X};
    r.h = h;
    r.method = "naive-enumeration";
    r.elapsed = seconds_since(t0);
    return r;
}

ShiftCheck shift_identity_counts(int s, i64 X, const Offset& h, i64 z, const CountLimits& limits) {
    if (z < 1 || z > X) throw std::invalid_argument("shift identity needs 1 <= z <= X");
    ShiftCheck check;
    const auto base = build_representation_table(s, X, limits);
    check.original = pair_count(base, base, h);
    check.shifted_h = {h.h1, h.h2 + 2 * h.h1 * z, h.h3 + 3 * h.h2 * z + 3 * h.h1 * z * z};
    const auto moved = build_representation_table(s, z + 1, X + z, limits);
    check.shifted = pair_count(moved, moved, check.shifted_h);
    return check;
}

bool verify_shift_identity(int s, i64 X, const Offset& h, i64 z, const CountLimits& limits) {
    return shift_identity_counts(s, X, h, z, limits).holds();
}

u64 count_quadratic_T0(i64 X, const CountLimits& limits) {
    if (X < 1) throw ConfigError("X must be positive");
    // key = sum x + (3X + 1) sum x^2 separates the two power sums.
    const u64 radix = 3 * static_cast<u64>(X) + 1;
    std::vector<u64> weights;
    for (i64 v = 1; v <= X; ++v) {
        const u64 x = static_cast<u64>(v);
        weights.push_back(x + radix * x * x);
    }
    return sum_of_squares(build_linear_table(3, 1, X, weights, 0, limits));
}

u64 count_mixed_g6(i64 X, const Offset& h, const CountLimits& limits) {
    if (X < 1) throw ConfigError("X must be positive");
    // Both sides share the key (2 h1 m1, 3 h1 m2 + 3 h2 m1) of their 3-tuple.
    const i128 h1 = h.h1, h2 = h.h2;
    const i128 m1max = 3 * static_cast<i128>(X);
    const i128 m2max = 3 * static_cast<i128>(X) * X;
    const i128 k1 = abs128(2 * h1) * m1max;
    const i128 k2 = abs128(3 * h1) * m2max + abs128(3 * h2) * m1max;
    SignedPacker packer;
    packer.add_axis(-k1, k1);
    packer.add_axis(-k2, k2);
    std::vector<u64> weights;
    for (i64 v = 1; v <= X; ++v) {
        const i128 x = v;
        const std::array<i128, 2> k{2 * h1 * x, 3 * h1 * x * x + 3 * h2 * x};
        weights.push_back(packer.weight(k));
    }
    return sum_of_squares(build_linear_table(3, 1, X, weights, packer.shift(), limits));
}

u64 count_twisted_moment_theta1(i64 X, const Offset& h, const CountLimits& limits) {
    if (X < 1) throw ConfigError("X must be positive");
    const u64 sides = checked_mul(2 * static_cast<u64>(X), multiset_count(3, X));
    if (sides > limits.table_multisets)
        throw BudgetExceeded("theta_1 side table exceeds the multiset budget");
    // u-side: (sum u, sum u^2) of 3-tuples in [1, X].
    const u64 radix = 3 * static_cast<u64>(X) + 1;
    std::vector<u64> uw;
    for (i64 v = 1; v <= X; ++v) {
        const u64 x = static_cast<u64>(v);
        uw.push_back(x + radix * x * x);
    }
    const FlatCountTable u_side = build_linear_table(3, 1, X, uw, 0, limits);

    // Side key (x, x^2 + 2 h1 U1, x^3 + 3 h2 U1 + 3 h1 U2) for x in [1, 2X].
    const i128 h1 = h.h1, h2 = h.h2;
    const i128 x_max = 2 * static_cast<i128>(X);
    const i128 u1_max = 3 * static_cast<i128>(X);
    const i128 u2_max = 3 * static_cast<i128>(X) * X;
    const i128 k2 = x_max * x_max + abs128(2 * h1) * u1_max;
    const i128 k3 = x_max * x_max * x_max + abs128(3 * h2) * u1_max + abs128(3 * h1) * u2_max;
    SignedPacker packer;
    packer.add_axis(0, x_max);
    packer.add_axis(-k2, k2);
    packer.add_axis(-k3, k3);
    const u64 shift = packer.shift();

    FlatCountTable sides_table(u_side.size());
    for (i128 x = 1; x <= x_max; ++x) {
        u_side.for_each([&](u64 ukey, u64 mult) {
            const i128 u1 = static_cast<i128>(ukey % radix);
            const i128 u2 = static_cast<i128>(ukey / radix);
            const std::array<i128, 3> k{x, x * x + 2 * h1 * u1, x * x * x + 3 * h2 * u1 + 3 * h1 * u2};
            sides_table.add(packer.weight(k) - shift, mult);
        });
    }
    return sum_of_squares(sides_table);
}

}  // namespace cubicvs
