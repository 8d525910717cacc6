#pragma once

// Shared domain types for the inhomogeneous cubic Vinogradov system
//
//     sum_{i<=s} (x_i^j - y_i^j) = h_j     (j = 1, 2, 3),   1 <= x_i, y_i <= X.
//
// Moment vectors (power sums of one side) are packed into a single 64-bit key
// by a mixed-radix code so that counting tables stay compact.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace cubicvs {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Parameters outside what the configured integer widths or budgets allow.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation would exceed its iteration or memory budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

struct Offset {
    i64 h1 = 0;
    i64 h2 = 0;
    i64 h3 = 0;

    Offset operator-() const { return {-h1, -h2, -h3}; }
    bool is_zero() const { return h1 == 0 && h2 == 0 && h3 == 0; }
    i64 operator[](int j) const { return j == 0 ? h1 : (j == 1 ? h2 : h3); }
    friend bool operator==(const Offset&, const Offset&) = default;
};

std::string to_string(const Offset& h);

struct MomentVector {
    u64 m1 = 0;
    u64 m2 = 0;
    u64 m3 = 0;

    u64 operator[](int j) const { return j == 0 ? m1 : (j == 1 ? m2 : m3); }
    friend bool operator==(const MomentVector&, const MomentVector&) = default;
};

struct Params {
    int s = 1;
    i64 X = 1;
    friend bool operator==(const Params&, const Params&) = default;
};

constexpr int kMaxPairs = 10;

// (sum x, sum x^2, sum x^3) in exact integer arithmetic; entries must lie in [1, X].
MomentVector moment_of(std::span<const i64> tuple, i64 X);

// Fermat conditions: h3 = h1 (mod 3) and h3 = h2 = h1 (mod 2).
bool congruence_soluble(const Offset& h);

std::pair<MomentVector, MomentVector> moment_bounds(int s, i64 X);

// Throws ConfigError unless s in [1, kMaxPairs], X >= 1, the moment box fits the
// key code and X^(2s) fits an unsigned 64-bit count.
void validate_params(const Params& p);

// Mixed-radix code for moment vectors of s-tuples with entries in [lo, hi].
// Component j ranges over [s*lo^j, s*hi^j]; the radix is s*(hi^j - lo^j) + 1.
class KeyCodec {
public:
    KeyCodec() = default;
    KeyCodec(int s, i64 lo, i64 hi);

    int s() const { return s_; }
    i64 lo() const { return lo_; }
    i64 hi() const { return hi_; }

    const MomentVector& min() const { return min_; }
    const MomentVector& max() const { return max_; }

    u64 pack(const MomentVector& m) const;
    MomentVector unpack(u64 key) const;

    // Key of m - h when every component stays inside the box, nothing otherwise.
    std::optional<u64> pack_difference(const MomentVector& m, const Offset& h) const;

    // The code is linear: pack(sum of elements) = sum of element_weight(x) - base_shift().
    u64 element_weight(i64 x) const;
    u64 base_shift() const { return base_shift_; }

    // Number of distinct representable keys (product of the radices).
    u128 capacity() const { return capacity_; }

private:
    int s_ = 0;
    i64 lo_ = 1;
    i64 hi_ = 1;
    MomentVector min_{};
    MomentVector max_{};
    u64 radix_[3] = {1, 1, 1};
    u64 stride_[3] = {1, 1, 1};
    u64 base_shift_ = 0;
    u128 capacity_ = 1;
};

// Checked integer helpers.
u64 checked_pow(u64 base, int exp);
u64 checked_mul(u64 a, u64 b);

// Floor-safe mod returning a value in [0, m).
inline i64 mod_floor(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace cubicvs
