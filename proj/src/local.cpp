#include "cubicvs/local.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cubicvs/expsum.hpp"
#include "cubicvs/parallel.hpp"

namespace cubicvs {

namespace {

i64 ipow(i64 p, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(r, p, &r)) throw ConfigError("modulus too large");
    }
    return r;
}

i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<i128>(mod_floor(a, m)) * mod_floor(b, m) % m);
}

i64 inverse_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, r = mod_floor(a, m);
    while (r != 0) {
        const i64 t = g / r;
        g -= t * r;
        std::swap(g, r);
        x -= t * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw std::logic_error("not invertible");
    return mod_floor(x, m);
}

int valuation(i64 v, i64 p, int cap) {
    if (v == 0) return cap;
    int n = 0;
    while (v % p == 0 && n < cap) {
        v /= p;
        ++n;
    }
    return n;
}

void check_prime(i64 p) {
    if (!is_prime(p)) throw ConfigError("p must be prime");
}

// Variables z = (x_1..x_s, y_1..y_s); the forms are sum sign_i z_i^j.
struct System {
    int s;
    Offset h;

    int sign(int i) const { return i < s ? 1 : -1; }

    // F_j(z) mod m for j = 1, 2, 3.
    std::array<i64, 3> residual(const std::vector<i64>& z, i64 m) const {
        std::array<i64, 3> f{mod_floor(-h.h1, m), mod_floor(-h.h2, m), mod_floor(-h.h3, m)};
        for (int i = 0; i < 2 * s; ++i) {
            const i64 v = mod_floor(z[static_cast<std::size_t>(i)], m);
            const i64 v2 = mulmod(v, v, m);
            const i64 v3 = mulmod(v2, v, m);
            const i64 pw[3] = {v, v2, v3};
            for (int j = 0; j < 3; ++j) f[j] = mod_floor(f[j] + sign(i) * pw[j], m);
        }
        return f;
    }

    // Jacobian minor on the given columns, mod m.
    std::array<std::array<i64, 3>, 3> minor(const std::vector<i64>& z, const std::array<int, 3>& cols,
                                            i64 m) const {
        std::array<std::array<i64, 3>, 3> M{};
        for (int c = 0; c < 3; ++c) {
            const i64 v = mod_floor(z[static_cast<std::size_t>(cols[c])], m);
            const i64 sg = sign(cols[c]);
            M[0][c] = mod_floor(sg, m);
            M[1][c] = mod_floor(sg * mulmod(2, v, m), m);
            M[2][c] = mod_floor(sg * mulmod(3, mulmod(v, v, m), m), m);
        }
        return M;
    }
};

i64 det3(const std::array<std::array<i64, 3>, 3>& M, i64 m) {
    auto t = [&](int a, int b, int c, int d) {
        return mod_floor(mulmod(M[a][b], M[c][d], m), m);
    };
    const i64 c0 = mod_floor(t(1, 1, 2, 2) - t(1, 2, 2, 1), m);
    const i64 c1 = mod_floor(t(1, 0, 2, 2) - t(1, 2, 2, 0), m);
    const i64 c2 = mod_floor(t(1, 0, 2, 1) - t(1, 1, 2, 0), m);
    return mod_floor(mulmod(M[0][0], c0, m) - mulmod(M[0][1], c1, m) + mulmod(M[0][2], c2, m), m);
}

// adj(M) with adj(M) M = det(M) I, mod m.
std::array<std::array<i64, 3>, 3> adjugate(const std::array<std::array<i64, 3>, 3>& M, i64 m) {
    std::array<std::array<i64, 3>, 3> A{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const int r0 = (c + 1) % 3, r1 = (c + 2) % 3;
            const int c0 = (r + 1) % 3, c1 = (r + 2) % 3;
            A[r][c] = mod_floor(mulmod(M[r0][c0], M[r1][c1], m) - mulmod(M[r0][c1], M[r1][c0], m), m);
        }
    return A;
}

// Best minor (lowest valuation) for the current point, valuation capped at cap.
std::pair<std::array<int, 3>, int> best_minor(const System& sys, const std::vector<i64>& z, i64 p,
                                              i64 m, int cap) {
    std::array<int, 3> best{0, 1, 2};
    int best_v = cap + 1;
    const int n = 2 * sys.s;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                const std::array<int, 3> cols{a, b, c};
                const int v = valuation(det3(sys.minor(z, cols, m), m), p, cap);
                if (v < best_v) {
                    best_v = v;
                    best = cols;
                }
            }
    return {best, best_v};
}

bool lift(const System& sys, std::vector<i64>& z, const std::array<int, 3>& cols, i64 p, int v,
          int target) {
    const i64 Pt = ipow(p, target);
    const i64 W = ipow(p, target + v);
    const i64 pv = ipow(p, v);
    for (int iter = 0; iter < 128; ++iter) {
        const auto f = sys.residual(z, Pt);
        if (f[0] == 0 && f[1] == 0 && f[2] == 0) {
            for (auto& zi : z) zi = mod_floor(zi, Pt);
            return true;
        }
        const auto M = sys.minor(z, cols, W);
        const i64 det = det3(M, W);
        if (det % pv != 0) return false;
        const i64 unit = (det / pv) % Pt;
        if (unit % p == 0) return false;
        const i64 uinv = inverse_mod(unit, Pt);
        const auto A = adjugate(M, W);
        const auto F = sys.residual(z, W);
        for (int r = 0; r < 3; ++r) {
            i64 w = 0;
            for (int c = 0; c < 3; ++c) w = mod_floor(w + mulmod(A[r][c], F[c], W), W);
            if (w % pv != 0) return false;
            const i64 delta = mulmod(w / pv, uinv, Pt);
            auto& zi = z[static_cast<std::size_t>(cols[r])];
            zi = mod_floor(zi - delta, W);
        }
    }
    return false;
}

}  // namespace

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

double series_term(i64 q, int s, const Offset& h) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    if (s < 1) throw std::invalid_argument("s must be positive");
    const auto sums = complete_sums_all(q);
    const double dq = static_cast<double>(q);
    const auto n = static_cast<std::size_t>(q);
    std::vector<cplx> partial(n);
    parallel_blocks(n, [&](std::size_t b) {
        const i64 a3 = static_cast<i64>(b);
        cplx acc = 0.0;
        for (i64 a2 = 0; a2 < q; ++a2)
            for (i64 a1 = 0; a1 < q; ++a1) {
                if (std::gcd(std::gcd(q, a1), std::gcd(a2, a3)) != 1) continue;
                const cplx S = sums[static_cast<std::size_t>(a1 + q * (a2 + q * a3))];
                const double mag = std::pow(std::norm(S) / (dq * dq), s);
                const i64 k = mod_floor(-(mulmod(a1, h.h1, q) + mulmod(a2, h.h2, q) + mulmod(a3, h.h3, q)), q);
                acc += mag * unit_phase(static_cast<double>(k) / dq);
            }
        partial[b] = acc;
    });
    cplx total = 0.0;
    for (const auto& v : partial) total += v;
    if (std::abs(total.imag()) > 1e-10)
        throw std::logic_error("series term has imaginary part " + std::to_string(total.imag()));
    return total.real();
}

std::vector<double> series_terms(i64 Qmax, int s, const Offset& h) {
    if (Qmax < 1) throw std::invalid_argument("Qmax must be positive");
    std::vector<double> out(static_cast<std::size_t>(Qmax));
    for (i64 q = 1; q <= Qmax; ++q) out[static_cast<std::size_t>(q - 1)] = series_term(q, s, h);
    return out;
}

DensityReport singular_series_truncated(int s, const Offset& h, i64 Qmax) {
    const auto terms = series_terms(Qmax, s, h);
    DensityReport rep;
    rep.truncation = Qmax;
    rep.method = "truncated-series";
    for (double t : terms) rep.value += t;

    // Least-squares fit of log|term| against log q over the top decade.
    const i64 start = std::max<i64>(1, (Qmax + 9) / 10);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (i64 q = start; q <= Qmax; ++q) {
        const double t = std::abs(terms[static_cast<std::size_t>(q - 1)]);
        if (t < 1e-300) continue;
        const double lx = std::log(static_cast<double>(q));
        const double ly = std::log(t);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    rep.tail_estimate = std::numeric_limits<double>::infinity();
    if (count >= 2 && sxx * count - sx * sx > 0) {
        const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / count;
        const double tau = -slope;
        if (tau > 1.0)
            rep.tail_estimate = std::exp(intercept) * std::pow(static_cast<double>(Qmax), 1.0 - tau) /
                                (tau - 1.0);
    }
    return rep;
}

DensityReport padic_density_via_sums(i64 p, int s, const Offset& h, int H) {
    check_prime(p);
    if (H < 0) throw std::invalid_argument("H must be non-negative");
    DensityReport rep;
    rep.truncation = H;
    rep.method = "truncated-series";
    i64 q = 1;
    for (int l = 0; l <= H; ++l) {
        if (q > 200) throw BudgetExceeded("p^H above 200 exceeds the q^4 budget");
        rep.value += series_term(q, s, h);
        if (l < H) q *= p;
    }
    return rep;
}

u128 count_solutions_mod(i64 q, int s, const Offset& h) {
    if (q < 1) throw std::invalid_argument("modulus must be positive");
    if (s < 1 || s > kMaxPairs) throw ConfigError("s out of range");
    const double work = std::pow(static_cast<double>(q), 4) * s;
    if (work > 2e9) throw BudgetExceeded("residue convolution beyond budget");
    checked_pow(static_cast<u64>(q), s);  // r_s(m) <= q^s must fit
    const auto n = static_cast<std::size_t>(q);
    const std::size_t cells = n * n * n;
    auto cell = [&](i64 m1, i64 m2, i64 m3) {
        return static_cast<std::size_t>(m1 + q * (m2 + q * m3));
    };
    std::vector<std::array<i64, 3>> element(n);
    for (i64 x = 0; x < q; ++x)
        element[static_cast<std::size_t>(x)] = {x, mulmod(x, x, q), mulmod(mulmod(x, x, q), x, q)};
    std::vector<u64> dist(cells, 0), next(cells);
    dist[0] = 1;
    for (int k = 0; k < s; ++k) {
        std::fill(next.begin(), next.end(), 0);
        for (i64 m3 = 0; m3 < q; ++m3)
            for (i64 m2 = 0; m2 < q; ++m2)
                for (i64 m1 = 0; m1 < q; ++m1) {
                    const u64 c = dist[cell(m1, m2, m3)];
                    if (c == 0) continue;
                    for (const auto& e : element) {
                        i64 a = m1 + e[0], b = m2 + e[1], d = m3 + e[2];
                        if (a >= q) a -= q;
                        if (b >= q) b -= q;
                        if (d >= q) d -= q;
                        next[cell(a, b, d)] += c;
                    }
                }
        dist.swap(next);
    }
    const i64 h1 = mod_floor(h.h1, q), h2 = mod_floor(h.h2, q), h3 = mod_floor(h.h3, q);
    u128 total = 0;
    for (i64 m3 = 0; m3 < q; ++m3)
        for (i64 m2 = 0; m2 < q; ++m2)
            for (i64 m1 = 0; m1 < q; ++m1) {
                const u64 c = dist[cell(m1, m2, m3)];
                if (c == 0) continue;
                const u64 d = dist[cell(mod_floor(m1 - h1, q), mod_floor(m2 - h2, q), mod_floor(m3 - h3, q))];
                total += static_cast<u128>(c) * d;
            }
    return total;
}

i128 series_term_numerator(i64 q, int s, const Offset& h) {
    if (q < 1) throw std::invalid_argument("q must be positive");
    i128 total = 0;
    for (i64 d = 1; d <= q; ++d) {
        if (q % d != 0) continue;
        // Moebius function of q / d.
        i64 m = q / d;
        int mu = 1;
        for (i64 f = 2; f * f <= m; ++f) {
            if (m % f != 0) continue;
            m /= f;
            if (m % f == 0) {
                mu = 0;
                break;
            }
            mu = -mu;
        }
        if (mu != 0 && m > 1) mu = -mu;
        if (mu == 0) continue;
        i128 scale = 1;
        for (int k = 0; k < 2 * s - 3; ++k) scale *= q / d;
        total += mu * static_cast<i128>(count_solutions_mod(d, s, h)) * scale;
    }
    return total;
}

DensityReport padic_density_via_counting(i64 p, int s, const Offset& h, int H) {
    check_prime(p);
    if (H < 0) throw std::invalid_argument("H must be non-negative");
    DensityReport rep;
    rep.truncation = H;
    rep.method = "exact-count";
    const i64 q = ipow(p, H);
    const u128 N = count_solutions_mod(q, s, h);
    const long double scale = std::pow(static_cast<long double>(q), 2 * s - 3);
    rep.value = static_cast<double>(static_cast<long double>(N) / scale);
    return rep;
}

std::optional<HenselWitness> hensel_nonsingular_search(i64 p, int s, const Offset& h, int depth,
                                                       const HenselOptions& options) {
    check_prime(p);
    if (s < 2 || s > kMaxPairs) throw ConfigError("need 2 <= s <= 10 for a 3x3 minor");
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    // No solutions modulo p at all: nothing to lift.
    if (std::pow(static_cast<double>(p), 4) * s <= 2e9 && count_solutions_mod(p, s, h) == 0)
        return std::nullopt;
    const System sys{s, h};
    std::mt19937_64 eng(options.seed);
    const std::size_t per_level = options.max_tries / static_cast<std::size_t>(options.max_valuation + 1);
    std::size_t tries = 0;
    std::vector<i64> z(static_cast<std::size_t>(2 * s));
    // Every minor is 6 times a Vandermonde product, and of three integers two share
    // a parity, so the valuation is at least 2 for p = 2 and at least 1 for p = 3.
    const int v_min = p == 2 ? 2 : (p == 3 ? 1 : 0);
    for (int v = v_min; v <= std::max(v_min, options.max_valuation); ++v) {
        const int level = 2 * v + 1;
        const i64 P = ipow(p, level);
        for (std::size_t t = 0; t < per_level; ++t) {
            ++tries;
            for (auto& zi : z) zi = static_cast<i64>(eng() % static_cast<u64>(P));
            // Solve the linear equation for the last variable.
            z.back() = 0;
            z.back() = sys.residual(z, P)[0];
            const auto f = sys.residual(z, P);
            if (f[0] != 0 || f[1] != 0 || f[2] != 0) continue;
            const auto [cols, mv] = best_minor(sys, z, p, P, level);
            if (mv > v) continue;
            const int target = std::max(depth, 2 * mv + 1);
            std::vector<i64> lifted = z;
            if (!lift(sys, lifted, cols, p, mv, target)) continue;
            HenselWitness w;
            w.p = p;
            w.level = target;
            w.x.assign(lifted.begin(), lifted.begin() + s);
            w.y.assign(lifted.begin() + s, lifted.end());
            w.columns = cols;
            w.valuation = mv;
            const i64 Pt = ipow(p, target);
            w.minor_mod = det3(sys.minor(lifted, cols, Pt), Pt);
            w.tries = tries;
            return w;
        }
    }
    return std::nullopt;
}

bool verify_witness(const HenselWitness& w, int s, const Offset& h) {
    if (static_cast<int>(w.x.size()) != s || static_cast<int>(w.y.size()) != s) return false;
    if (w.level < 2 * w.valuation + 1) return false;
    const System sys{s, h};
    std::vector<i64> z = w.x;
    z.insert(z.end(), w.y.begin(), w.y.end());
    const i64 P = ipow(w.p, w.level);
    const auto f = sys.residual(z, P);
    if (f[0] != 0 || f[1] != 0 || f[2] != 0) return false;
    const i64 det = det3(sys.minor(z, w.columns, P), P);
    return det == w.minor_mod && valuation(det, w.p, w.level) == w.valuation;
}

}  // namespace cubicvs
