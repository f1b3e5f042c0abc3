#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "counting.hpp"
#include "dyadic.hpp"

namespace vinodec {

inline constexpr std::uint64_t kDefaultGridOpsBudget = 200'000'000;

/// Complex weights a_1..a_N of a Weyl sum on the torus.
struct WeightSequence {
    std::uint32_t N = 0;
    std::vector<std::complex<double>> a;  // a[i] is the weight of frequency i+1

    static WeightSequence unit(std::uint32_t N);
    /// Unimodular phases from a splitmix64 stream; bit-reproducible.
    static WeightSequence random_unimodular(std::uint32_t N, std::uint64_t seed);

    double l2_norm_squared() const;
    bool is_unit() const;
    /// Restriction to the frequencies whose arc at level 2 is `I`
    /// (n belongs to the arc containing n/N, right endpoints assigned left).
    WeightSequence masked_to_arc(const DyadicInterval& I) const;
};

/// Level-`level` index of the arc owning frequency n at delta = 1/N.
std::uint64_t arc_of_frequency(std::uint32_t n, std::uint32_t N, int level);

/// f(x) = sum_n a_n e(n x_1 + n^2 x_2 + ... + n^k x_k).
std::complex<double> eval_weyl_sum(int k, const WeightSequence& w,
                                   std::span<const double> x);

/// Even moment int_{[0,1]^k} |f|^{2s} by tensor-grid quadrature with
/// 2sN^j + 1 points in coordinate j; exact for the trigonometric polynomial.
/// Throws ResourceError when the grid exceeds the ops budget.
double exact_moment(int k, int s, const WeightSequence& w,
                    std::uint64_t grid_ops_budget = kDefaultGridOpsBudget,
                    unsigned threads = 0);

/// Same value through Parseval: |f|^{2s} integrates to the squared l2 mass of
/// the s-fold convolution of the weighted frequency distribution.
double moment_identity(int k, int s, const WeightSequence& w,
                       std::uint64_t budget_bytes = kDefaultBudgetBytes);

/// Quadrature when the grid fits the budget, identity path otherwise.
double moment_auto(int k, int s, const WeightSequence& w,
                   std::uint64_t grid_ops_budget = kDefaultGridOpsBudget,
                   std::uint64_t budget_bytes = kDefaultBudgetBytes,
                   unsigned threads = 0);

struct RatioReport {
    double value = 0.0;
    std::vector<std::uint64_t> grid;  // per-dimension point counts; empty = exact path
    bool converged = true;
    double estimate_error = 0.0;  // 0 whenever the quadrature is exact
};

/// Periodic single-frequency-per-arc decoupling ratio at delta = 1/N:
/// D = (int |f|^{p_k})^(1/p_k) / (sum |a_n|^2)^(1/2) with p_k = k(k+1).
RatioReport decoupling_ratio(int k, const WeightSequence& w,
                             std::uint64_t grid_ops_budget = kDefaultGridOpsBudget,
                             std::uint64_t budget_bytes = kDefaultBudgetBytes,
                             unsigned threads = 0);

enum class WeightMode { kUnit, kRandom };

struct GrowthResult {
    std::vector<std::uint32_t> N_values;
    std::vector<double> D_values;
    double slope = 0.0;  // least-squares slope of log D vs log N
};

GrowthResult growth_exponent(int k, std::span<const std::uint32_t> N_list,
                             WeightMode mode, std::uint64_t seed,
                             std::uint64_t grid_ops_budget = kDefaultGridOpsBudget,
                             std::uint64_t budget_bytes = kDefaultBudgetBytes,
                             unsigned threads = 0);

/// Symmetric bilinear ratio for arcs I, I' in P(1/4) with dist >= 1/4:
/// int |f_I|^{p_k/2} |f_I'|^{p_k/2} / (||a_I||_2 ||a_I'||_2)^{p_k/2},
/// by midpoint Riemann sums with grid doubling (the integrand is not a
/// trigonometric polynomial when p_k/2 is odd).
RatioReport bilinear_ratio(int k, std::uint32_t N, const DyadicInterval& I,
                           const DyadicInterval& I_prime, const WeightSequence& w,
                           double rel_tolerance = 1e-3, int max_doublings = 8,
                           std::uint64_t grid_ops_budget = kDefaultGridOpsBudget,
                           unsigned threads = 0);

} // namespace vinodec
