#pragma once

// Exact counting of B_s(X;h) by pairing representation tables, with a naive
// enumeration oracle and the auxiliary mixed systems of the minor-arc analysis.

#include <functional>
#include <string>
#include <vector>

#include "cubicvs/core.hpp"
#include "cubicvs/flat_table.hpp"

namespace cubicvs {

class TableCache;

struct CountLimits {
    u64 naive_iterations = 1'000'000'000;
    u64 table_multisets = 100'000'000;
};

// r_s(m) for s-tuples with entries in [lo, hi]; the ordinary table has lo = 1, hi = X.
class RepresentationTable {
public:
    RepresentationTable(int s, i64 lo, i64 hi, FlatCountTable entries);

    int s() const { return codec_.s(); }
    i64 lo() const { return codec_.lo(); }
    i64 hi() const { return codec_.hi(); }
    i64 width() const { return hi() - lo() + 1; }
    const KeyCodec& codec() const { return codec_; }
    const FlatCountTable& entries() const { return entries_; }

    u64 multiplicity(const MomentVector& m) const;
    u64 total() const { return entries_.total(); }
    std::size_t distinct() const { return entries_.size(); }

private:
    KeyCodec codec_;
    FlatCountTable entries_;
};

// Number of non-decreasing s-tuples over a range of `width` values, saturating.
u64 multiset_count(int s, i64 width);

RepresentationTable build_representation_table(int s, i64 X, const CountLimits& limits = {});
RepresentationTable build_representation_table(int s, i64 lo, i64 hi, const CountLimits& limits);

// Streams every multiset of size s from [lo, hi] in lexicographic order as
// (sorted tuple, number of ordered tuples with that content).
void for_each_multiset(int s, i64 lo, i64 hi,
                       const std::function<void(std::span<const i64>, u64)>& visit);

// sum_m r_a(m) r_b(m - h), with out-of-range m - h contributing nothing.
u64 pair_count(const RepresentationTable& a, const RepresentationTable& b, const Offset& h);

struct CountResult {
    u64 value = 0;
    Params params;
    Offset h;
    double elapsed = 0.0;
    std::string method;
};

struct CountOptions {
    CountLimits limits;
    const TableCache* cache = nullptr;
};

CountResult count_solutions(int s, i64 X, const Offset& h, const CountOptions& options = {});
CountResult count_solutions(const RepresentationTable& table, const Offset& h);

CountResult count_naive(int s, i64 X, const Offset& h, const CountLimits& limits = {});

struct ShiftCheck {
    u64 original = 0;
    u64 shifted = 0;
    Offset shifted_h;
    bool holds() const { return original == shifted; }
};

// Counts the translated system over u, v in [z+1, X+z] with right-hand side
// (h1, h2 + 2 h1 z, h3 + 3 h2 z + 3 h1 z^2) next to B_s(X;h).
ShiftCheck shift_identity_counts(int s, i64 X, const Offset& h, i64 z,
                                 const CountLimits& limits = {});
bool verify_shift_identity(int s, i64 X, const Offset& h, i64 z, const CountLimits& limits = {});

// Solutions of sum_{i<=3}(x_i^j - y_i^j) = 0 (j = 1, 2) in [1, X].
u64 count_quadratic_T0(i64 X, const CountLimits& limits = {});

// Solutions in [1, X]^6 of
//   3 h1 sum(x_i^2 - y_i^2) + 3 h2 sum(x_i - y_i) = 0,   2 h1 sum(x_i - y_i) = 0.
u64 count_mixed_g6(i64 X, const Offset& h, const CountLimits& limits = {});

// The mean value of |f(alpha;2X)^2 g(alpha;X)^6| read as a solution count:
// x, y in [1, 2X] and u, v in [1, X]^3 with
//   x - y = 0,
//   x^2 - y^2 + 2 h1 sum(u - v) = 0,
//   x^3 - y^3 + 3 h2 sum(u - v) + 3 h1 sum(u^2 - v^2) = 0.
u64 count_twisted_moment_theta1(i64 X, const Offset& h, const CountLimits& limits = {});

}  // namespace cubicvs
