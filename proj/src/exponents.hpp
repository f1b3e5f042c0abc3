#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace vinodec {

using Rational = boost::multiprecision::cpp_rational;

/// Critical Lebesgue exponent p_k = k(k+1).
std::int64_t critical_exponent(int k);

/// Interpolation weight theta_l = 1/(k-l+1). Verifies, in exact rationals,
/// that (p_l, p_k-p_l) = theta_l (p_k-p_{k-l}, p_{k-l}) + (1-theta_l)
/// (p_{l-1}, p_k-p_{l-1}) with zero residual and that all three points have
/// coordinates summing to p_k; throws std::logic_error otherwise.
Rational holder_theta(int k, int l);

/// The (k-1)x(k-1) linear-inequality skeleton a >= M a + c eta of the slope
/// system: row l encodes A_l >= (1/l) A_{k-l} + ((k-l)/(k-l+1)) A_{l-1},
/// with A_0 = eta moved into the source vector c.
struct ExponentSystem {
    int k = 0;
    std::vector<std::vector<Rational>> M;  // (k-1) rows of (k-1) entries
    std::vector<Rational> c;               // k-1 entries; c[0] = (k-1)/k
};

ExponentSystem build_system(int k);

struct CancellationResult {
    bool left_vector_ok = false;   // 1^T M = 1^T exactly
    Rational eta_coefficient;      // 1^T c = (k-1)/k
};

/// Summing the inequalities cancels A_1..A_{k-1}: any finite solution forces
/// 0 >= eta_coefficient * eta, hence eta <= 0.
CancellationResult verify_cancellation(int k);

/// Slope sigma_l = (k-l+1) p_l / (l p_k) + (p_k-p_l)/p_k of the finiteness
/// bound A_l(b) <= eta (1 - b sigma_l); always positive.
Rational finiteness_slope(int k, int l);

/// Largest b for which the lower-degree decoupling step applies:
/// l(k-l)/((l+1)(k-l+1)), additionally capped by (l-1)/(k-l+2) when l >= 2.
Rational validity_range(int k, int l);

/// A_0(b) = eta (1 - b) as the affine form (constant, coefficient of eta).
std::pair<Rational, Rational> a0_line(const Rational& b);

} // namespace vinodec
