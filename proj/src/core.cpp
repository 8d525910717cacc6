#include "cubicvs/core.hpp"

#include <limits>

namespace cubicvs {

namespace {

constexpr u64 kU64Max = std::numeric_limits<u64>::max();

}  // namespace

std::string to_string(const Offset& h) {
    return std::to_string(h.h1) + "," + std::to_string(h.h2) + "," + std::to_string(h.h3);
}

u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit multiplication overflow");
    return r;
}

u64 checked_pow(u64 base, int exp) {
    u64 r = 1;
    for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

MomentVector moment_of(std::span<const i64> tuple, i64 X) {
    if (tuple.empty()) throw std::invalid_argument("moment_of: empty tuple");
    MomentVector m;
    for (i64 x : tuple) {
        if (x < 1 || x > X) throw std::invalid_argument("moment_of: entry outside [1, X]");
        const u64 ux = static_cast<u64>(x);
        const u64 sq = checked_mul(ux, ux);
        const u64 cu = checked_mul(sq, ux);
        if (__builtin_add_overflow(m.m1, ux, &m.m1) || __builtin_add_overflow(m.m2, sq, &m.m2) ||
            __builtin_add_overflow(m.m3, cu, &m.m3))
            throw OverflowError("moment_of: power sum overflows 64 bits");
    }
    return m;
}

bool congruence_soluble(const Offset& h) {
    const bool mod3 = mod_floor(h.h3 - h.h1, 3) == 0;
    const bool mod2 = mod_floor(h.h3 - h.h2, 2) == 0 && mod_floor(h.h2 - h.h1, 2) == 0;
    return mod3 && mod2;
}

std::pair<MomentVector, MomentVector> moment_bounds(int s, i64 X) {
    if (s < 1 || X < 1) throw std::invalid_argument("moment_bounds: s and X must be positive");
    const u64 us = static_cast<u64>(s);
    const u64 ux = static_cast<u64>(X);
    MomentVector lo{us, us, us};
    MomentVector hi{checked_mul(us, ux), checked_mul(us, checked_pow(ux, 2)),
                    checked_mul(us, checked_pow(ux, 3))};
    return {lo, hi};
}

void validate_params(const Params& p) {
    if (p.s < 1 || p.s > kMaxPairs)
        throw ConfigError("s must lie in [1, " + std::to_string(kMaxPairs) + "]");
    if (p.X < 1) throw ConfigError("X must be positive");
    try {
        KeyCodec codec(p.s, 1, p.X);
        (void)codec;
        checked_pow(static_cast<u64>(p.X), 2 * p.s);
    } catch (const OverflowError&) {
        throw ConfigError("(s=" + std::to_string(p.s) + ", X=" + std::to_string(p.X) +
                          ") exceeds the 64-bit key or count capacity");
    }
}

KeyCodec::KeyCodec(int s, i64 lo, i64 hi) : s_(s), lo_(lo), hi_(hi) {
    if (s < 1 || lo < 0 || hi < lo) throw std::invalid_argument("KeyCodec: bad range");
    const u64 us = static_cast<u64>(s);
    for (int j = 0; j < 3; ++j) {
        const u64 lo_pow = checked_mul(us, checked_pow(static_cast<u64>(lo), j + 1));
        const u64 hi_pow = checked_mul(us, checked_pow(static_cast<u64>(hi), j + 1));
        (j == 0 ? min_.m1 : j == 1 ? min_.m2 : min_.m3) = lo_pow;
        (j == 0 ? max_.m1 : j == 1 ? max_.m2 : max_.m3) = hi_pow;
        radix_[j] = hi_pow - lo_pow + 1;
        if (radix_[j] == 0) throw OverflowError("KeyCodec: radix overflow");
    }
    capacity_ = static_cast<u128>(radix_[0]) * radix_[1];
    if (capacity_ > kU64Max) throw OverflowError("KeyCodec: key space exceeds 64 bits");
    capacity_ *= radix_[2];
    // Keep UINT64_MAX free as an empty-slot sentinel.
    if (capacity_ > kU64Max) throw OverflowError("KeyCodec: key space exceeds 64 bits");
    stride_[0] = 1;
    stride_[1] = radix_[0];
    stride_[2] = radix_[0] * radix_[1];
    // Wrapping arithmetic: the shift cancels exactly once s elements are summed.
    base_shift_ = min_.m1 * stride_[0] + min_.m2 * stride_[1] + min_.m3 * stride_[2];
}

u64 KeyCodec::pack(const MomentVector& m) const {
    for (int j = 0; j < 3; ++j)
        if (m[j] < min_[j] || m[j] > max_[j]) throw std::out_of_range("KeyCodec::pack: outside box");
    return (m.m1 - min_.m1) + stride_[1] * (m.m2 - min_.m2) + stride_[2] * (m.m3 - min_.m3);
}

MomentVector KeyCodec::unpack(u64 key) const {
    MomentVector m;
    m.m1 = key % radix_[0] + min_.m1;
    key /= radix_[0];
    m.m2 = key % radix_[1] + min_.m2;
    key /= radix_[1];
    m.m3 = key + min_.m3;
    return m;
}

std::optional<u64> KeyCodec::pack_difference(const MomentVector& m, const Offset& h) const {
    u64 key = 0;
    for (int j = 0; j < 3; ++j) {
        const i128 v = static_cast<i128>(m[j]) - h[j];
        if (v < static_cast<i128>(min_[j]) || v > static_cast<i128>(max_[j])) return std::nullopt;
        key += stride_[j] * static_cast<u64>(v - static_cast<i128>(min_[j]));
    }
    return key;
}

u64 KeyCodec::element_weight(i64 x) const {
    const u64 ux = static_cast<u64>(x);
    return ux * stride_[0] + ux * ux * stride_[1] + ux * ux * ux * stride_[2];
}

}  // namespace cubicvs
