#include "cubicvs/expsum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "cubicvs/arcs.hpp"
#include "cubicvs/parallel.hpp"
#include "cubicvs/quadrature.hpp"

namespace cubicvs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kPanelCap = std::size_t{1} << 20;

// frac(a * m) for a in [0,1) and 0 <= m < 2^32, using the exact product a*m = p + err.
double frac_mul_small(double a, double m) {
    const double p = a * m;
    const double err = std::fma(a, m, -p);
    return frac((p - std::floor(p)) + err);
}

i64 cube_mod(i64 x, i64 q) {
    const i128 r = static_cast<i128>(mod_floor(x, q));
    return static_cast<i64>(r * r % q * r % q);
}

i64 square_mod(i64 x, i64 q) {
    const i128 r = static_cast<i128>(mod_floor(x, q));
    return static_cast<i64>(r * r % q);
}

// (a1 x + a2 x^2 + a3 x^3) mod q.
i64 phase_index(const RationalCenter& c, i64 x) {
    const i64 q = c.q;
    const i128 v = static_cast<i128>(mod_floor(c.a1, q)) * mod_floor(x, q) +
                   static_cast<i128>(mod_floor(c.a2, q)) * square_mod(x, q) +
                   static_cast<i128>(mod_floor(c.a3, q)) * cube_mod(x, q);
    return static_cast<i64>(v % q);
}

cplx root_of_unity(i64 k, i64 q) {
    return unit_phase(static_cast<double>(k) / static_cast<double>(q));
}

void check_weyl_length(i64 X) {
    if (X < 1) throw std::invalid_argument("Weyl sum length must be positive");
    if (X > 2'000'000) throw ConfigError("Weyl sum length above 2e6 is not supported");
}

// Polynomial phase b1 g + b2 g^2 + b3 g^3 evaluated in Horner form.
double cubic_phase(const PhasePoint& b, double g) {
    return ((b.a3 * g + b.a2) * g + b.a1) * g;
}

cplx integrand(const PhasePoint& b, double g) { return unit_phase(cubic_phase(b, g)); }

struct SimpsonState {
    const PhasePoint& beta;
    std::size_t panels = 0;
    double error = 0.0;
    bool capped = false;
};

cplx simpson_refine(SimpsonState& st, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const cplx flm = integrand(st.beta, lm);
    const cplx frm = integrand(st.beta, rm);
    const double h = (b - a) / 12.0;
    const cplx left = h * (fa + 4.0 * flm + fm);
    const cplx right = h * (fm + 4.0 * frm + fb);
    const cplx both = left + right;
    const double est = std::abs(both - whole) / 15.0;
    if (est <= tol || depth >= 40 || st.capped) {
        st.error += est;
        return both + (both - whole) / 15.0;
    }
    if (++st.panels >= kPanelCap) {
        st.capped = true;
        st.error += est;
        return both + (both - whole) / 15.0;
    }
    return simpson_refine(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_refine(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double nearest_rep(double v) { return v - std::nearbyint(v); }

}  // namespace

PhasePoint PhasePoint::reduced() const { return {frac(a1), frac(a2), frac(a3)}; }

i64 RationalCenter::content() const {
    return std::gcd(std::gcd(q, a1), std::gcd(a2, a3));
}

PhasePoint RationalCenter::as_phase() const {
    const double dq = static_cast<double>(q);
    return {static_cast<double>(a1) / dq, static_cast<double>(a2) / dq,
            static_cast<double>(a3) / dq};
}

double frac(double v) {
    double r = v - std::floor(v);
    if (r >= 1.0) r = 0.0;  // v slightly below an integer can round up
    return r;
}

double frac_mul(double a, i64 n) {
    if (n < 0) return frac(-frac_mul(a, -n));
    a = frac(a);
    const u64 un = static_cast<u64>(n);
    const double lo = static_cast<double>(un & 0xffffffffu);
    const double hi = static_cast<double>(un >> 32);
    double r = frac_mul_small(a, lo);
    if (hi != 0.0) r += frac_mul_small(frac(std::ldexp(a, 32)), hi);
    return frac(r);
}

cplx unit_phase(double t) {
    const double r = nearest_rep(t);
    return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

cplx weyl_sum_f(const PhasePoint& alpha, i64 X) {
    check_weyl_length(X);
    cplx sum = 0.0;
    for (i64 x = 1; x <= X; ++x) {
        const double t = frac_mul(alpha.a1, x) + frac_mul(alpha.a2, x * x) +
                         frac_mul(alpha.a3, x * x * x);
        sum += unit_phase(t);
    }
    return sum;
}

cplx weyl_sum_f(const RationalCenter& center, i64 X) {
    check_weyl_length(X);
    if (center.q < 1) throw std::invalid_argument("denominator must be positive");
    cplx sum = 0.0;
    for (i64 x = 1; x <= X; ++x) sum += root_of_unity(phase_index(center, x), center.q);
    return sum;
}

cplx weyl_sum_f(const RationalCenter& center, const PhasePoint& offset, i64 X) {
    check_weyl_length(X);
    if (center.q < 1) throw std::invalid_argument("denominator must be positive");
    const double dq = static_cast<double>(center.q);
    cplx sum = 0.0;
    for (i64 x = 1; x <= X; ++x) {
        const double t = static_cast<double>(phase_index(center, x)) / dq +
                         frac_mul(offset.a1, x) + frac_mul(offset.a2, x * x) +
                         frac_mul(offset.a3, x * x * x);
        sum += unit_phase(t);
    }
    return sum;
}

cplx shifted_sum_g(const PhasePoint& alpha, double theta, i64 X, const Offset& h) {
    check_weyl_length(X);
    cplx sum = 0.0;
    for (i64 y = 1; y <= X; ++y) {
        const double t = frac_mul(theta, y) + frac_mul(alpha.a2, 2 * h.h1 * y) +
                         frac_mul(alpha.a3, 3 * h.h2 * y + 3 * h.h1 * y * y);
        sum += unit_phase(t);
    }
    return sum;
}

cplx complete_sum_S(const RationalCenter& center) {
    if (center.q < 1) throw std::invalid_argument("denominator must be positive");
    cplx sum = 0.0;
    for (i64 r = 1; r <= center.q; ++r) sum += root_of_unity(phase_index(center, r), center.q);
    return sum;
}

std::vector<cplx> complete_sums_all(i64 q) {
    if (q < 1) throw std::invalid_argument("denominator must be positive");
    if (q > 200) throw BudgetExceeded("complete sums beyond q = 200 exceed the q^4 budget");
    const auto n = static_cast<std::size_t>(q);
    std::vector<cplx> roots(n);
    for (i64 k = 0; k < q; ++k) roots[static_cast<std::size_t>(k)] = root_of_unity(k, q);
    std::vector<i64> r2(n), r3(n);
    for (i64 r = 0; r < q; ++r) {
        r2[static_cast<std::size_t>(r)] = square_mod(r, q);
        r3[static_cast<std::size_t>(r)] = cube_mod(r, q);
    }
    std::vector<cplx> out(n * n * n);
    std::vector<i64> idx(n);
    for (i64 a3 = 0; a3 < q; ++a3) {
        for (i64 a2 = 0; a2 < q; ++a2) {
            for (i64 r = 0; r < q; ++r) {
                const auto ur = static_cast<std::size_t>(r);
                idx[ur] = static_cast<i64>((static_cast<i128>(a2) * r2[ur] + static_cast<i128>(a3) * r3[ur]) % q);
            }
            for (i64 a1 = 0; a1 < q; ++a1) {
                cplx sum = 0.0;
                for (i64 r = 0; r < q; ++r) {
                    auto& k = idx[static_cast<std::size_t>(r)];
                    sum += roots[static_cast<std::size_t>(k)];
                    k += r;
                    if (k >= q) k -= q;
                }
                out[static_cast<std::size_t>(a1 + q * (a2 + q * a3))] = sum;
            }
        }
    }
    return out;
}

double phase_variation(const PhasePoint& beta) {
    return std::abs(beta.a1) + 2.0 * std::abs(beta.a2) + 3.0 * std::abs(beta.a3);
}

QuadResult oscillatory_I(const PhasePoint& beta, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    QuadResult out;
    const double V = phase_variation(beta);
    if (!std::isfinite(V)) throw std::invalid_argument("phase must be finite");
    double initial = std::max(8.0, std::ceil(8.0 * V));
    if (initial > static_cast<double>(kPanelCap)) {
        initial = static_cast<double>(kPanelCap);
        out.converged = false;
    }
    const auto n0 = static_cast<std::size_t>(initial);
    SimpsonState st{beta};
    st.panels = n0;
    const double width = 1.0 / static_cast<double>(n0);
    cplx total = 0.0;
    cplx fa = integrand(beta, 0.0);
    for (std::size_t i = 0; i < n0; ++i) {
        const double a = static_cast<double>(i) * width;
        const double b = (i + 1 == n0) ? 1.0 : static_cast<double>(i + 1) * width;
        const double m = 0.5 * (a + b);
        const cplx fm = integrand(beta, m);
        const cplx fb = integrand(beta, b);
        const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_refine(st, a, b, fa, fm, fb, whole, tol * (b - a), 0);
        fa = fb;
    }
    out.value = total;
    out.error_estimate = st.error;
    out.panels = st.panels;
    if (st.capped) out.converged = false;
    return out;
}

cplx oscillatory_I_gauss(const PhasePoint& beta) {
    const double V = phase_variation(beta);
    if (!std::isfinite(V)) throw std::invalid_argument("phase must be finite");
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(V)));
    const GaussRule& rule = gauss_legendre(10);
    const double width = 1.0 / static_cast<double>(panels);
    cplx total = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) * width;
        cplx panel = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k)
            panel += rule.weights[k] * integrand(beta, mid + 0.5 * width * rule.nodes[k]);
        total += panel;
    }
    return 0.5 * width * total;
}

QuadResult scaled_I(const PhasePoint& beta, i64 X, double tol) {
    if (X < 1) throw std::invalid_argument("X must be positive");
    const double x = static_cast<double>(X);
    const PhasePoint scaled{beta.a1 * x, beta.a2 * x * x, beta.a3 * x * x * x};
    QuadResult r = oscillatory_I(scaled, tol / x);
    r.value *= x;
    r.error_estimate *= x;
    return r;
}

cplx arc_approximant_V(const PhasePoint& alpha, const RationalCenter& center, i64 X, double tol) {
    const PhasePoint c = center.as_phase();
    const PhasePoint offset{nearest_rep(alpha.a1 - c.a1), nearest_rep(alpha.a2 - c.a2),
                            nearest_rep(alpha.a3 - c.a3)};
    return arc_approximant_V_offset(center, offset, X, tol);
}

cplx arc_approximant_V_offset(const RationalCenter& center, const PhasePoint& offset, i64 X,
                              double tol) {
    const cplx S = complete_sum_S(center);
    return S / static_cast<double>(center.q) * scaled_I(offset, X, tol).value;
}

double grid_fourier_coefficient(int s, i64 X, const Offset& h, std::array<i64, 3> grid) {
    validate_params({s, X});
    const i64 powers[3] = {X, X * X, X * X * X};
    for (int j = 0; j < 3; ++j) {
        if (grid[j] <= 2 * s * powers[j])
            throw ConfigError("grid size N" + std::to_string(j + 1) + " must exceed 2 s X^" +
                              std::to_string(j + 1));
    }
    // Differences of moments range over |m_j| <= s (X^j - 1); beyond that the count is 0.
    for (int j = 0; j < 3; ++j)
        if (std::abs(h[j]) > s * (powers[j] - 1)) return 0.0;
    const double work = static_cast<double>(grid[0]) * static_cast<double>(grid[1]) *
                        static_cast<double>(grid[2]) * static_cast<double>(X);
    if (work > 2e9) throw BudgetExceeded("grid sum too large");

    // A_j[k][x-1] = e(k x^j / N_j);  twist_j[k] = e(-k h_j / N_j).
    std::vector<std::vector<cplx>> A[3];
    std::vector<cplx> twist[3];
    for (int j = 0; j < 3; ++j) {
        const i64 N = grid[j];
        A[j].assign(static_cast<std::size_t>(N), std::vector<cplx>(static_cast<std::size_t>(X)));
        twist[j].resize(static_cast<std::size_t>(N));
        for (i64 k = 0; k < N; ++k) {
            for (i64 x = 1; x <= X; ++x) {
                const i64 xp = j == 0 ? mod_floor(x, N) : (j == 1 ? square_mod(x, N) : cube_mod(x, N));
                const i64 idx = static_cast<i64>(static_cast<i128>(k) * xp % N);
                A[j][static_cast<std::size_t>(k)][static_cast<std::size_t>(x - 1)] = root_of_unity(idx, N);
            }
            const i64 idx = static_cast<i64>(static_cast<i128>(k) * mod_floor(-h[j], N) % N);
            twist[j][static_cast<std::size_t>(k)] = root_of_unity(idx, N);
        }
    }

    const auto n3 = static_cast<std::size_t>(grid[2]);
    std::vector<double> partial(n3, 0.0);
    parallel_blocks(n3, [&](std::size_t k3) {
        std::vector<cplx> row(static_cast<std::size_t>(X));
        double acc = 0.0;
        for (i64 k2 = 0; k2 < grid[1]; ++k2) {
            const auto& a2 = A[1][static_cast<std::size_t>(k2)];
            const auto& a3 = A[2][k3];
            for (std::size_t x = 0; x < row.size(); ++x) row[x] = a2[x] * a3[x];
            const cplx tw23 = twist[1][static_cast<std::size_t>(k2)] * twist[2][k3];
            for (i64 k1 = 0; k1 < grid[0]; ++k1) {
                const auto& a1 = A[0][static_cast<std::size_t>(k1)];
                cplx f = 0.0;
                for (std::size_t x = 0; x < row.size(); ++x) f += a1[x] * row[x];
                const double mod2 = std::norm(f);
                double p = 1.0;
                for (int i = 0; i < s; ++i) p *= mod2;
                acc += p * (twist[0][static_cast<std::size_t>(k1)] * tw23).real();
            }
        }
        partial[k3] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total / (static_cast<double>(grid[0]) * static_cast<double>(grid[1]) *
                    static_cast<double>(grid[2]));
}

double psi(double alpha3, i64 X) {
    const OneDimLabel label = classify_one_dim(frac(alpha3), static_cast<double>(X), X);
    if (!label.major) return 0.0;
    const double x3 = std::pow(static_cast<double>(X), 3);
    const double dev = std::abs(static_cast<double>(label.q) * frac(alpha3) - static_cast<double>(label.a));
    return 1.0 / (static_cast<double>(label.q) + x3 * dev);
}

}  // namespace cubicvs
