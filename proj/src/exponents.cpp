#include "exponents.hpp"

#include <stdexcept>

namespace vinodec {

namespace {

void check_degree(int k, int minimum = 1) {
    if (k < minimum || k > 1000)
        throw std::invalid_argument("degree k out of supported range");
}

void check_split(int k, int l) {
    if (l < 1 || l >= k) throw std::invalid_argument("split l must be in [1,k-1]");
}

Rational p(int l) { return Rational(l) * (l + 1); }

} // namespace

std::int64_t critical_exponent(int k) {
    check_degree(k);
    return static_cast<std::int64_t>(k) * (k + 1);
}

Rational holder_theta(int k, int l) {
    check_degree(k, 2);
    check_split(k, l);
    const Rational theta(1, k - l + 1);
    // The three exponent pairs of the Holder step; all lie on x + y = p_k.
    const Rational ax = p(l), ay = p(k) - p(l);
    const Rational bx = p(k) - p(k - l), by = p(k - l);
    const Rational cx = p(l - 1), cy = p(k) - p(l - 1);
    if (ax + ay != p(k) || bx + by != p(k) || cx + cy != p(k))
        throw std::logic_error("exponent pairs do not lie on the simplex line");
    if (ax != theta * bx + (1 - theta) * cx || ay != theta * by + (1 - theta) * cy)
        throw std::logic_error("collinearity identity has nonzero residual");
    return theta;
}

ExponentSystem build_system(int k) {
    check_degree(k, 2);
    ExponentSystem sys;
    sys.k = k;
    sys.M.assign(k - 1, std::vector<Rational>(k - 1, Rational(0)));
    sys.c.assign(k - 1, Rational(0));
    for (int l = 1; l <= k - 1; ++l) {
        // A_l >= (1/l) A_{k-l} + ((k-l)/(k-l+1)) A_{l-1}; columns index A_1..A_{k-1}.
        sys.M[l - 1][k - l - 1] += Rational(1, l);
        if (l >= 2)
            sys.M[l - 1][l - 2] += Rational(k - l, k - l + 1);
        else
            sys.c[l - 1] += Rational(k - 1, k);  // A_0 term of the l = 1 row
    }
    return sys;
}

CancellationResult verify_cancellation(int k) {
    const ExponentSystem sys = build_system(k);
    CancellationResult result;
    result.left_vector_ok = true;
    for (int col = 0; col < k - 1; ++col) {
        Rational sum(0);
        for (int row = 0; row < k - 1; ++row) sum += sys.M[row][col];
        if (sum != 1) result.left_vector_ok = false;
    }
    result.eta_coefficient = 0;
    for (const Rational& v : sys.c) result.eta_coefficient += v;
    return result;
}

Rational finiteness_slope(int k, int l) {
    check_degree(k, 2);
    check_split(k, l);
    const Rational sigma =
        Rational(k - l + 1) * p(l) / (Rational(l) * p(k)) + (p(k) - p(l)) / p(k);
    if (sigma <= 0) throw std::logic_error("finiteness slope must be positive");
    return sigma;
}

Rational validity_range(int k, int l) {
    check_degree(k, 2);
    check_split(k, l);
    const Rational first = Rational(l * (k - l)) / ((l + 1) * (k - l + 1));
    if (l == 1) return first;
    const Rational second = Rational(l - 1, k - l + 2);
    return std::min(first, second);
}

std::pair<Rational, Rational> a0_line(const Rational& b) {
    if (b < 0 || b > 1) throw std::invalid_argument("b must lie in [0,1]");
    return {Rational(0), Rational(1) - b};
}

} // namespace vinodec
