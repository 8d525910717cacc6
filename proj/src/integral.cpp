#include "cubicvs/integral.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <tuple>

#include "cubicvs/arcs.hpp"
#include "cubicvs/parallel.hpp"
#include "cubicvs/quadrature.hpp"

namespace cubicvs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre panels on [0, B] with breakpoints B/2^k down to 1/4.
void half_axis_rule(double B, double nodes_per_unit, std::vector<double>& t, std::vector<double>& w) {
    std::vector<double> breaks{B};
    while (breaks.back() / 2.0 >= 0.25) breaks.push_back(breaks.back() / 2.0);
    breaks.push_back(0.0);
    for (std::size_t k = breaks.size() - 1; k > 0; --k) {
        const double a = breaks[k], b = breaks[k - 1];
        const int m = std::max(4, static_cast<int>(std::ceil(nodes_per_unit * (b - a))));
        const GaussRule& rule = gauss_legendre(m);
        for (int i = 0; i < m; ++i) {
            t.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[static_cast<std::size_t>(i)]);
            w.push_back(0.5 * (b - a) * rule.weights[static_cast<std::size_t>(i)]);
        }
    }
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

IntegralResult finish(int s, const NormalizedOffset& n, const IntegrandGrid& grid,
                      const std::vector<cplx> factors[3]) {
    IntegralResult r;
    r.s = s;
    r.n = n;
    r.B = grid.B();
    r.value = grid.weighted_sum(s, factors, false);
    r.half_value = grid.weighted_sum(s, factors, true);
    r.axis_nodes = grid.axis_size();
    r.evaluations = grid.evaluations();
    const double e = 3.0 - 2.0 * s / 3.0;
    if (e < 0.0) {
        r.truncation_estimate = (r.value - r.half_value) / (std::pow(2.0, -e) - 1.0);
        r.tail_constant = r.truncation_estimate / std::pow(r.B, e);
    } else {
        r.truncation_estimate = std::numeric_limits<double>::infinity();
        r.tail_constant = std::numeric_limits<double>::infinity();
    }
    return r;
}

void check_args(int s, double B, double tol) {
    if (s < 1 || s > kMaxPairs) throw ConfigError("s out of range");
    if (!(B > 0.0) || B > 256.0) throw ConfigError("B must lie in (0, 256]");
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
}

}  // namespace

NormalizedOffset NormalizedOffset::from_offset(const Offset& h, i64 X) {
    if (X < 1) throw std::invalid_argument("X must be positive");
    const double x = static_cast<double>(X);
    return {static_cast<double>(h.h1) / x, static_cast<double>(h.h2) / (x * x),
            static_cast<double>(h.h3) / (x * x * x)};
}

IntegrandGrid::IntegrandGrid(double B, const IntegralOptions& options, double tol) : B_(B) {
    if (!(options.nodes_per_unit > 0.0)) throw ConfigError("nodes per unit must be positive");
    std::vector<double> t, w;
    half_axis_rule(B, options.nodes_per_unit, t, w);
    half_ = t.size();
    for (std::size_t i = half_; i-- > 0;) {
        nodes_.push_back(-t[i]);
        weights_.push_back(w[i]);
    }
    for (std::size_t i = 0; i < half_; ++i) {
        nodes_.push_back(t[i]);
        weights_.push_back(w[i]);
    }
    const std::size_t N = nodes_.size();

    // Inner rule on [0,1]: one panel per unit of the largest phase variation.
    const double vmax = 6.0 * B;
    const int panels = std::max(1, static_cast<int>(std::ceil(vmax)));
    const int per_panel = tol >= 1e-12 ? 10 : 16;
    const GaussRule& rule = gauss_legendre(per_panel);
    std::vector<double> gamma, gw;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
        for (int i = 0; i < per_panel; ++i) {
            gamma.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[static_cast<std::size_t>(i)]);
            gw.push_back(0.5 * (b - a) * rule.weights[static_cast<std::size_t>(i)]);
        }
    }
    const std::size_t K = gamma.size();

    // E_j[i][k] = e(t_i gamma_k^j), stored as separate real and imaginary planes.
    std::vector<double> re[3], im[3];
    for (int j = 0; j < 3; ++j) {
        re[j].resize(N * K);
        im[j].resize(N * K);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < K; ++k) {
                const double g = gamma[k];
                const double gp = j == 0 ? g : (j == 1 ? g * g : g * g * g);
                const cplx e = unit_phase(nodes_[i] * gp);
                re[j][i * K + k] = e.real();
                im[j][i * K + k] = e.imag();
            }
    }

    values_.assign((N - half_) * N * N, 0.0);
    parallel_blocks(N - half_, [&](std::size_t b3) {
        const std::size_t i3 = half_ + b3;
        std::vector<double> pr(K), pi(K);
        for (std::size_t i2 = 0; i2 < N; ++i2) {
            for (std::size_t k = 0; k < K; ++k) {
                const double ar = re[1][i2 * K + k], ai = im[1][i2 * K + k];
                const double br = re[2][i3 * K + k], bi = im[2][i3 * K + k];
                pr[k] = gw[k] * (ar * br - ai * bi);
                pi[k] = gw[k] * (ar * bi + ai * br);
            }
            double* out = &values_[(b3 * N + i2) * N];
            for (std::size_t i1 = 0; i1 < N; ++i1) {
                const double* er = &re[0][i1 * K];
                const double* ei = &im[0][i1 * K];
                double sr[4] = {0, 0, 0, 0}, si[4] = {0, 0, 0, 0};
                std::size_t k = 0;
                for (; k + 4 <= K; k += 4)
                    for (int u = 0; u < 4; ++u) {
                        sr[u] += pr[k + u] * er[k + u] - pi[k + u] * ei[k + u];
                        si[u] += pr[k + u] * ei[k + u] + pi[k + u] * er[k + u];
                    }
                for (; k < K; ++k) {
                    sr[0] += pr[k] * er[k] - pi[k] * ei[k];
                    si[0] += pr[k] * ei[k] + pi[k] * er[k];
                }
                const double vr = (sr[0] + sr[1]) + (sr[2] + sr[3]);
                const double vi = (si[0] + si[1]) + (si[2] + si[3]);
                out[i1] = vr * vr + vi * vi;
            }
        }
    });
}

double IntegrandGrid::at(std::size_t i1, std::size_t i2, std::size_t i3) const {
    const std::size_t N = nodes_.size();
    if (i3 < half_) {
        i1 = N - 1 - i1;
        i2 = N - 1 - i2;
        i3 = N - 1 - i3;
    }
    return values_[((i3 - half_) * N + i2) * N + i1];
}

double IntegrandGrid::weighted_sum(int s, const std::vector<cplx> factors[3], bool inner_half) const {
    const std::size_t N = nodes_.size();
    const double cut = 0.5 * B_;
    auto inside = [&](std::size_t i) { return !inner_half || std::abs(nodes_[i]) < cut; };
    std::vector<double> partial(N - half_, 0.0);
    parallel_blocks(N - half_, [&](std::size_t b3) {
        const std::size_t i3 = half_ + b3;
        if (!inside(i3)) return;
        double acc = 0.0;
        for (std::size_t i2 = 0; i2 < N; ++i2) {
            if (!inside(i2)) continue;
            const cplx f23 = factors[1][i2] * factors[2][i3];
            const double w23 = weights_[i2] * weights_[i3];
            const double* row = &values_[(b3 * N + i2) * N];
            for (std::size_t i1 = 0; i1 < N; ++i1) {
                if (!inside(i1)) continue;
                double p = 1.0;
                for (int k = 0; k < s; ++k) p *= row[i1];
                acc += w23 * weights_[i1] * p * (factors[0][i1] * f23).real();
            }
        }
        partial[b3] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    // Each stored point stands for itself and its mirror image.
    return 2.0 * total;
}

namespace {

std::mutex grid_mutex;
std::map<std::tuple<double, double, bool>, std::shared_ptr<const IntegrandGrid>> grid_cache;

}  // namespace

std::shared_ptr<const IntegrandGrid> integrand_grid(double B, const IntegralOptions& options,
                                                    double tol) {
    auto& cache = grid_cache;
    const auto key = std::make_tuple(B, options.nodes_per_unit, tol >= 1e-12);
    std::lock_guard lock(grid_mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    if (cache.size() >= 4) cache.clear();
    auto grid = std::make_shared<const IntegrandGrid>(B, options, tol);
    cache.emplace(key, grid);
    return grid;
}

void clear_integrand_grids() {
    std::lock_guard lock(grid_mutex);
    grid_cache.clear();
}

IntegralResult singular_integral_truncated(int s, const NormalizedOffset& n, double B, double tol,
                                           const IntegralOptions& options) {
    check_args(s, B, tol);
    const auto grid = integrand_grid(B, options, tol);
    std::vector<cplx> factors[3];
    for (int j = 0; j < 3; ++j)
        for (double t : grid->nodes()) factors[j].push_back(unit_phase(-t * n[j]));
    return finish(s, n, *grid, factors);
}

IntegralResult singular_integral_smoothed(int s, const NormalizedOffset& n, double eps, double B,
                                          double tol, const IntegralOptions& options) {
    check_args(s, B, tol);
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    const auto grid = integrand_grid(B, options, tol);
    std::vector<cplx> factors[3];
    for (int j = 0; j < 3; ++j)
        for (double t : grid->nodes())
            factors[j].push_back(unit_phase(-t * n[j]) * sinc(kTwoPi * eps * t));
    return finish(s, n, *grid, factors);
}

double integrand_modulus_squared(const PhasePoint& beta, double tol) {
    return std::norm(oscillatory_I(beta, tol).value);
}

OracleResult real_density_oracle(int s, const NormalizedOffset& n, double eps, std::uint64_t samples,
                                 std::uint64_t seed) {
    if (s < 1 || s > kMaxPairs) throw ConfigError("s out of range");
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (samples < 10'000) throw ConfigError("at least 10^4 samples are required");
    constexpr std::uint64_t kBlock = 1 << 16;
    const std::size_t blocks = static_cast<std::size_t>((samples + kBlock - 1) / kBlock);
    std::vector<std::uint64_t> hits(blocks, 0);
    parallel_blocks(blocks, [&](std::size_t b) {
        std::mt19937_64 eng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * b));
        const std::uint64_t begin = b * kBlock;
        const std::uint64_t end = std::min<std::uint64_t>(samples, begin + kBlock);
        std::uint64_t count = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
            double m1 = 0, m2 = 0, m3 = 0;
            for (int k = 0; k < 2 * s; ++k) {
                const double v = unit_from_bits(eng());
                const double sg = k < s ? 1.0 : -1.0;
                m1 += sg * v;
                m2 += sg * v * v;
                m3 += sg * v * v * v;
            }
            if (std::abs(m1 - n.n1) < eps && std::abs(m2 - n.n2) < eps && std::abs(m3 - n.n3) < eps)
                ++count;
        }
        hits[b] = count;
    });
    OracleResult r;
    r.samples = samples;
    r.eps = eps;
    for (auto h : hits) r.hits += h;
    const double p = static_cast<double>(r.hits) / static_cast<double>(samples);
    const double box = 8.0 * eps * eps * eps;
    r.estimate = p / box;
    r.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples)) / box;
    return r;
}

}  // namespace cubicvs
