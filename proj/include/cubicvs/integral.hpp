#pragma once

// The singular integral J_s(n) = int_{R^3} |I(beta)|^(2s) e(-beta.n) dbeta, truncated
// to [-B, B]^3, and a Monte Carlo estimate of the real density it measures.

#include <cstdint>
#include <memory>
#include <vector>

#include "cubicvs/core.hpp"
#include "cubicvs/expsum.hpp"

namespace cubicvs {

// n_j = h_j X^-j.
struct NormalizedOffset {
    double n1 = 0.0;
    double n2 = 0.0;
    double n3 = 0.0;

    double operator[](int j) const { return j == 0 ? n1 : (j == 1 ? n2 : n3); }
    NormalizedOffset operator-() const { return {-n1, -n2, -n3}; }
    static NormalizedOffset from_offset(const Offset& h, i64 X);
};

struct IntegralOptions {
    // Outer Gauss-Legendre nodes per unit length of beta (at least 4 per panel).
    double nodes_per_unit = 8.0;
};

// Values of |I(beta)|^2 on a symmetric product Gauss-Legendre grid over [-B, B]^3.
// Panels have dyadic breakpoints 0, B/2^k, ..., B/2, B (down to width >= 1/4), so
// the sub-grid inside [-B/2, B/2]^3 is itself a product rule.
class IntegrandGrid {
public:
    IntegrandGrid(double B, const IntegralOptions& options, double tol);

    double B() const { return B_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t axis_size() const { return nodes_.size(); }
    std::size_t evaluations() const { return values_.size(); }

    // |I|^2 at (nodes[i1], nodes[i2], nodes[i3]).
    double at(std::size_t i1, std::size_t i2, std::size_t i3) const;

    // sum over the grid (or its [-B/2, B/2]^3 part) of
    //   w1 w2 w3 |I|^(2s) Re(factor1[i1] factor2[i2] factor3[i3]),
    // where the factors must satisfy factor(-beta) = conj(factor(beta)).
    double weighted_sum(int s, const std::vector<cplx> factors[3], bool inner_half) const;

private:
    double B_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::size_t half_;
    std::vector<double> values_;  // i3 >= half_, index ((i3 - half_) * N + i2) * N + i1
};

// Shared grid for (B, options, tol), built on first use.
std::shared_ptr<const IntegrandGrid> integrand_grid(double B, const IntegralOptions& options,
                                                    double tol);
void clear_integrand_grids();

struct IntegralResult {
    int s = 0;
    NormalizedOffset n;
    double B = 0.0;
    double value = 0.0;       // over [-B, B]^3
    double half_value = 0.0;  // over [-B/2, B/2]^3
    // Extrapolated contribution of R^3 outside the box, from the decay exponent
    // 3 - 2s/3 and the two nested values; infinite when the exponent is >= 0.
    double truncation_estimate = 0.0;
    double tail_constant = 0.0;  // C in C B^(3 - 2s/3)
    std::size_t axis_nodes = 0;
    std::size_t evaluations = 0;
};

IntegralResult singular_integral_truncated(int s, const NormalizedOffset& n, double B,
                                           double tol = 1e-8, const IntegralOptions& options = {});

// The same integrand damped by prod_j sinc(2 pi eps beta_j): the expectation of the
// box-counting density estimate at half-width eps.
IntegralResult singular_integral_smoothed(int s, const NormalizedOffset& n, double eps, double B,
                                          double tol = 1e-8, const IntegralOptions& options = {});

// Direct evaluation of |I(beta)|^2 on the grid's inner rule; used to validate the
// factorized evaluator.
double integrand_modulus_squared(const PhasePoint& beta, double tol);

struct OracleResult {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    double eps = 0.0;
};

// (2 eps)^-3 vol{(x,y) in [0,1]^(2s) : |sum(x_i^j - y_i^j) - n_j| < eps for j = 1,2,3},
// estimated by uniform sampling, with its binomial standard error.
OracleResult real_density_oracle(int s, const NormalizedOffset& n, double eps, std::uint64_t samples,
                                 std::uint64_t seed);

}  // namespace cubicvs
