#pragma once

// Generating functions of the cubic system: the Weyl sum f, the shifted sum g,
// complete sums S(q,a), the oscillatory integral I(beta) and the major-arc
// approximant built from them.

#include <array>
#include <complex>
#include <vector>

#include "cubicvs/core.hpp"

namespace cubicvs {

using cplx = std::complex<double>;

// alpha in [0,1)^3 after reduced(), or an unconstrained beta in R^3.
struct PhasePoint {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;

    double operator[](int j) const { return j == 0 ? a1 : (j == 1 ? a2 : a3); }
    PhasePoint reduced() const;
    PhasePoint operator-() const { return {-a1, -a2, -a3}; }
};

struct RationalCenter {
    i64 q = 1;
    i64 a1 = 0;
    i64 a2 = 0;
    i64 a3 = 0;

    i64 operator[](int j) const { return j == 0 ? a1 : (j == 1 ? a2 : a3); }
    // gcd(q, a1, a2, a3).
    i64 content() const;
    PhasePoint as_phase() const;
};

// Fractional part in [0, 1).
double frac(double v);
// frac(a * n) without forming the rounded product; exact up to the final rounding.
double frac_mul(double a, i64 n);

// e(t) = exp(2 pi i t) with t reduced mod 1 first.
cplx unit_phase(double t);

// sum_{1<=x<=X} e(a1 x + a2 x^2 + a3 x^3); each term's phase is reduced mod 1
// before exponentiation. Requires X^3 < 2^63.
cplx weyl_sum_f(const PhasePoint& alpha, i64 X);
// alpha = a/q exactly, phases computed in integer arithmetic mod q.
cplx weyl_sum_f(const RationalCenter& center, i64 X);
// alpha = a/q + offset, the rational part exact.
cplx weyl_sum_f(const RationalCenter& center, const PhasePoint& offset, i64 X);

// sum_{1<=y<=X} e(y theta + 2 h1 y a2 + (3 h2 y + 3 h1 y^2) a3).
cplx shifted_sum_g(const PhasePoint& alpha, double theta, i64 X, const Offset& h);

// sum_{r=1}^{q} e_q(a1 r + a2 r^2 + a3 r^3).
cplx complete_sum_S(const RationalCenter& center);

// Every S(q, a) for a in [0, q)^3, stored at a1 + q (a2 + q a3).
std::vector<cplx> complete_sums_all(i64 q);

struct QuadResult {
    cplx value;
    double error_estimate = 0.0;
    bool converged = true;
    std::size_t panels = 0;
};

// Total phase variation bound |b1| + 2|b2| + 3|b3| of the integrand on [0, 1].
double phase_variation(const PhasePoint& beta);

// int_0^1 e(b1 g + b2 g^2 + b3 g^3) dg by adaptive Simpson on an initial partition
// of at least 8 panels per unit of phase variation. Absolute error target tol;
// refinement stops at 2^20 panels with converged = false.
QuadResult oscillatory_I(const PhasePoint& beta, double tol);

// Same integral by a fixed 10-point Gauss-Legendre rule on one panel per unit of
// phase variation. Much cheaper; used as the inner kernel of the singular integral.
cplx oscillatory_I_gauss(const PhasePoint& beta);

// int_0^X e(b1 g + b2 g^2 + b3 g^3) dg = X I(b1 X, b2 X^2, b3 X^3); tol is absolute.
QuadResult scaled_I(const PhasePoint& beta, i64 X, double tol);

// q^{-1} S(q,a) I(alpha - a/q; X), alpha - a/q taken as the representative nearest 0.
cplx arc_approximant_V(const PhasePoint& alpha, const RationalCenter& center, i64 X,
                       double tol = 1e-9);
// The same with alpha given as a/q + offset.
cplx arc_approximant_V_offset(const RationalCenter& center, const PhasePoint& offset, i64 X,
                              double tol = 1e-9);

// (N1 N2 N3)^{-1} sum over the grid of |f|^{2s} e(-alpha.h), real part. Exact for
// the count B_s(X;h) once N_j > 2 s X^j.
double grid_fourier_coefficient(int s, i64 X, const Offset& h, std::array<i64, 3> grid);

// (q + X^3 |q a3 - a|)^{-1} when a3 lies in an arc M(q,a) of M(X), zero otherwise.
double psi(double alpha3, i64 X);

}  // namespace cubicvs
