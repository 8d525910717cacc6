#pragma once

// Singular series and p-adic densities of the cubic system.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubicvs/core.hpp"

namespace cubicvs {

struct DensityReport {
    double value = 0.0;
    i64 truncation = 0;  // Qmax for the series, H for a p-adic density
    double tail_estimate = 0.0;
    double imag_residue = 0.0;
    std::string method;
};

// sum over a in [1,q]^3 with gcd(q,a) = 1 of |S(q,a)/q|^(2s) e_q(-a.h).
// Throws std::logic_error if the imaginary part exceeds 1e-10.
double series_term(i64 q, int s, const Offset& h);

// The q-th terms for q = 1..Qmax.
std::vector<double> series_terms(i64 Qmax, int s, const Offset& h);

// sum_{q <= Qmax} series_term(q). The tail is extrapolated from a power-law fit
// |term(q)| ~ C q^-tau over the top decade of q: C Qmax^(1-tau)/(tau-1).
DensityReport singular_series_truncated(int s, const Offset& h, i64 Qmax);

// sum_{l <= H} series_term(p^l).
DensityReport padic_density_via_sums(i64 p, int s, const Offset& h, int H);

// p^(-H(2s-3)) N(p^H), N(q) the number of solutions of the system modulo q with
// all 2s variables in [0, q), counted by convolving residue distributions.
DensityReport padic_density_via_counting(i64 p, int s, const Offset& h, int H);

// Exact N(q).
u128 count_solutions_mod(i64 q, int s, const Offset& h);

// series_term(q) * q^(2s-3) exactly, by Moebius inversion of
//   N(q) / q^(2s-3) = sum_{d | q} series_term(d).
i128 series_term_numerator(i64 q, int s, const Offset& h);

bool is_prime(i64 n);

// A solution mod p^level with a 3x3 Jacobian minor of p-adic valuation v, where
// level >= 2v + 1. The minor is a unit (v = 0) only for p >= 5: every such minor
// is 6 times a Vandermonde product.
struct HenselWitness {
    i64 p = 0;
    int level = 0;
    std::vector<i64> x;
    std::vector<i64> y;
    std::array<int, 3> columns{};  // variable indices; s..2s-1 refer to y
    int valuation = 0;
    i64 minor_mod = 0;  // determinant of the minor mod p^level
    std::size_t tries = 0;
};

struct HenselOptions {
    std::uint64_t seed = 0x5eed;
    std::size_t max_tries = 4'000'000;
    int max_valuation = 3;
};

// Randomized search for a solution at level 2v+1 with a minor of valuation v, for
// v = 0, 1, ..., then Newton lifting to level max(depth, 2v+1).
std::optional<HenselWitness> hensel_nonsingular_search(i64 p, int s, const Offset& h, int depth,
                                                       const HenselOptions& options = {});

// Recomputes the system residues and the minor for a witness.
bool verify_witness(const HenselWitness& w, int s, const Offset& h);

}  // namespace cubicvs
