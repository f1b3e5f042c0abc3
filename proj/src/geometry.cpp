#include "geometry.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vinodec {

namespace {

void check_degree(int k) {
    if (k < 1 || k > kMaxGeometryDegree)
        throw std::invalid_argument("degree k must be in [1," +
                                    std::to_string(kMaxGeometryDegree) + "]");
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Stacked derivative rows d^1..d^k Gamma(c); upper triangular with diagonal i!.
Mat derivative_matrix(int k, double c) {
    Mat d(k, k);
    for (int i = 1; i <= k; ++i) {
        const Vec row = curve_derivative(k, i, c);
        for (int j = 0; j < k; ++j) d(i - 1, j) = row[j];
    }
    return d;
}

} // namespace

double Parallelepiped::volume() const {
    double v = determinant(axes);
    for (double h : half_widths) v *= 2.0 * h;
    return std::fabs(v);
}

std::vector<Vec> Parallelepiped::vertices() const {
    const std::size_t k = dim();
    std::vector<Vec> out;
    out.reserve(std::size_t{1} << k);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        Vec v = center;
        for (std::size_t i = 0; i < k; ++i) {
            const double sign = (mask >> i) & 1 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < k; ++j)
                v[j] += sign * half_widths[i] * axes(i, j);
        }
        out.push_back(std::move(v));
    }
    return out;
}

Vec AffineMap::apply(const Vec& x) const { return add(linear.apply(x), translation); }

Vec AffineMap::apply_inverse(const Vec& x) const {
    return solve_lower_triangular(linear, sub(Vec(x), translation));
}

Vec moment_curve(int k, double xi) {
    check_degree(k);
    Vec out(k);
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
        p *= xi;
        out[j] = p;
    }
    return out;
}

Vec curve_derivative(int k, int order, double xi) {
    check_degree(k);
    if (order < 1 || order > k)
        throw std::invalid_argument("derivative order must be in [1,k]");
    Vec out(k, 0.0);
    for (int j = order; j <= k; ++j) {
        double coeff = 1.0;  // j!/(j-order)!
        for (int t = j; t > j - order; --t) coeff *= t;
        out[j - 1] = coeff * std::pow(xi, j - order);
    }
    return out;
}

int partition_level(double delta) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("partition scale delta must be in (0,1]");
    int n = 0;
    while (std::ldexp(1.0, -n) > delta) {
        ++n;
        if (n > DyadicInterval::kMaxLevel)
            throw std::invalid_argument("partition scale delta is too small");
    }
    return n;
}

std::vector<DyadicInterval> dyadic_partition(const DyadicInterval& I, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (delta > I.length()) throw std::invalid_argument("delta exceeds |I|");
    const int n = partition_level(delta);
    const int levels_down = n - I.level;
    if (levels_down > 24)
        throw ResourceError("partition would hold more than 2^24 intervals",
                            std::uint64_t{1} << levels_down, std::uint64_t{1} << 24);
    const std::uint64_t count = std::uint64_t{1} << levels_down;
    std::vector<DyadicInterval> out;
    out.reserve(count);
    const std::uint64_t base = I.index << levels_down;
    for (std::uint64_t j = 0; j < count; ++j) out.emplace_back(n, base + j);
    return out;
}

Parallelepiped cap(const DyadicInterval& J, int k) {
    check_degree(k);
    Parallelepiped box;
    const double c = J.center();
    box.center = moment_curve(k, c);
    box.axes = derivative_matrix(k, c);
    box.half_widths.resize(k);
    double len = 1.0;
    for (int i = 0; i < k; ++i) {
        len *= J.length();
        box.half_widths[i] = len;
    }
    return box;
}

Parallelepiped polar_box(const DyadicInterval& I, int k) {
    check_degree(k);
    const Mat d = derivative_matrix(k, I.center());
    // Columns of D^-1 scaled by |I|^-i give the polar box axes: for
    // x = sum t_i w_i (D^-1 e_i) the gauge is max |t_i|.
    Parallelepiped box;
    box.center.assign(k, 0.0);
    box.half_widths.resize(k);
    for (int i = 0; i < k; ++i) box.half_widths[i] = std::pow(I.length(), -(i + 1));
    // D is upper triangular; solve D^T y = e_i by forward substitution on D^T.
    Mat dT(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) dT(r, c) = d(c, r);
    box.axes = Mat(k, k);
    for (int i = 0; i < k; ++i) {
        Vec e(k, 0.0);
        e[i] = 1.0;
        // Column i of D^-1 equals the solution x of D x = e_i; D upper
        // triangular = (D^T)^T, so solve via the lower-triangular transpose
        // in reversed order. Simpler: back substitution on D directly.
        Vec x(k, 0.0);
        for (int r = k - 1; r >= 0; --r) {
            double s = e[r];
            for (int c = r + 1; c < k; ++c) s -= d(r, c) * x[c];
            x[r] = s / d(r, r);
        }
        for (int j = 0; j < k; ++j) box.axes(i, j) = x[j];
    }
    return box;
}

double polar_box_gauge(const DyadicInterval& I, int k, std::span<const double> x) {
    check_degree(k);
    if (static_cast<int>(x.size()) != k)
        throw std::invalid_argument("point dimension does not match degree");
    const double c = I.center();
    double g = 0.0;
    double len_pow = 1.0;
    for (int i = 1; i <= k; ++i) {
        len_pow *= I.length();
        const Vec d = curve_derivative(k, i, c);
        double inner = 0.0;
        for (int j = 0; j < k; ++j) inner += x[j] * d[j];
        g = std::max(g, std::fabs(inner) * len_pow);
    }
    return g;
}

double polar_box_volume(const DyadicInterval& I, int k) {
    check_degree(k);
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= 2.0 * std::pow(I.length(), -i) / factorial(i);
    return v;
}

double bump(const DyadicInterval& I, int k, std::span<const double> x) {
    const double g = std::max(1.0, polar_box_gauge(I, k, x));
    return std::pow(g, -10.0 * k) / polar_box_volume(I, k);
}

AffineMap affine_map(const DyadicInterval& I, int k) {
    check_degree(k);
    const double a = I.lower();
    const double kappa = I.length();
    AffineMap m;
    m.linear = Mat(k, k);
    m.translation.resize(k);
    // (A eta)_j = sum_{j'=0}^{j} binom(j,j') a^(j-j') kappa^j' eta_j', eta_0 = 1.
    for (int j = 1; j <= k; ++j) {
        double binom = 1.0;
        for (int jp = 0; jp <= j; ++jp) {
            const double coeff = binom * std::pow(a, j - jp) * std::pow(kappa, jp);
            if (jp == 0)
                m.translation[j - 1] = coeff;
            else
                m.linear(j - 1, jp - 1) = coeff;
            binom = binom * (j - jp) / (jp + 1);
        }
    }
    return m;
}

namespace {

using ExactScalar = boost::multiprecision::cpp_rational;
using ExactVec = std::vector<ExactScalar>;

ExactScalar exact_pow(const ExactScalar& base, int exp) {
    ExactScalar r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Vertices of the cap over J in exact dyadic arithmetic. Everything in the
// rescaling identity is a dyadic rational, so the vertex transport can be
// carried out without rounding; mapping through A_I^-1 in doubles instead
// would divide catastrophically cancelled numerators by kappa^j.
std::vector<ExactVec> exact_cap_vertices(const DyadicInterval& J, int k) {
    const ExactScalar c(2 * J.index + 1,
                        boost::multiprecision::cpp_int(1) << (J.level + 1));
    const ExactScalar len(1, boost::multiprecision::cpp_int(1) << J.level);
    std::vector<ExactVec> vertices;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        ExactVec v(k);
        for (int comp = 1; comp <= k; ++comp) {
            ExactScalar value = exact_pow(c, comp);
            ExactScalar width = 1;
            for (int i = 1; i <= k; ++i) {
                width *= len;
                if (comp < i) continue;
                ExactScalar coeff = 1;  // comp!/(comp-i)!
                for (int t = comp; t > comp - i; --t) coeff *= t;
                const ExactScalar term =
                    width * coeff * exact_pow(c, comp - i);
                value += ((mask >> (i - 1)) & 1) ? term : -term;
            }
            v[comp - 1] = value;
        }
        vertices.push_back(std::move(v));
    }
    return vertices;
}

} // namespace

double verify_cap_rescaling(const DyadicInterval& I, const DyadicInterval& J, int k) {
    check_degree(k);
    if (!I.contains(J)) throw std::invalid_argument("J must be contained in I");
    const DyadicInterval JI(J.level - I.level,
                            J.index - (I.index << (J.level - I.level)));

    // Exact affine map of I: linear part lower triangular, all dyadic.
    const ExactScalar a(I.index, boost::multiprecision::cpp_int(1) << I.level);
    const ExactScalar kappa(1, boost::multiprecision::cpp_int(1) << I.level);
    std::vector<ExactVec> linear(k, ExactVec(k, ExactScalar(0)));
    ExactVec translation(k);
    for (int j = 1; j <= k; ++j) {
        ExactScalar binom = 1;
        for (int jp = 0; jp <= j; ++jp) {
            const ExactScalar coeff =
                binom * exact_pow(a, j - jp) * exact_pow(kappa, jp);
            if (jp == 0)
                translation[j - 1] = coeff;
            else
                linear[j - 1][jp - 1] = coeff;
            binom = binom * (j - jp) / (jp + 1);
        }
    }

    const std::vector<ExactVec> from = exact_cap_vertices(J, k);
    const std::vector<ExactVec> to = exact_cap_vertices(JI, k);
    ExactScalar worst = 0;
    for (std::size_t v = 0; v < from.size(); ++v) {
        // forward substitution: solve linear * x = vertex - translation
        ExactVec x(k);
        for (int row = 0; row < k; ++row) {
            ExactScalar rhs = from[v][row] - translation[row];
            for (int col = 0; col < row; ++col) rhs -= linear[row][col] * x[col];
            x[row] = rhs / linear[row][row];
        }
        ExactScalar dist2 = 0;
        for (int row = 0; row < k; ++row) {
            const ExactScalar d = x[row] - to[v][row];
            dist2 += d * d;
        }
        worst = std::max(worst, dist2);
    }
    return std::sqrt(worst.convert_to<double>());
}

double wedge_volume(const std::vector<Vec>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("wedge of an empty list");
    const std::size_t m = vectors.size();
    const std::size_t k = vectors[0].size();
    if (m > k) throw std::invalid_argument("more vectors than ambient dimension");
    for (const Vec& v : vectors)
        if (v.size() != k) throw std::invalid_argument("mixed vector dimensions");
    if (m == k) {
        Mat stacked(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) stacked(i, j) = vectors[i][j];
        return std::fabs(determinant(std::move(stacked)));
    }
    Mat gram(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) gram(i, j) = dot(vectors[i], vectors[j]);
    return std::sqrt(std::max(0.0, determinant(std::move(gram))));
}

double transversality_value(int k, int l, double xi1, double xi2) {
    check_degree(k);
    if (l < 1 || l >= k) throw std::invalid_argument("split l must be in [1,k-1]");
    // Translating both points by -xi1 leaves the wedge unchanged (the
    // rescaling map with kappa = 1 has unit Jacobian and preserves each
    // derivative), so evaluate at (0, delta). The rows at 0 are exact
    // multiples of basis vectors; eliminating them leaves the minor
    // M[i][c] = (l+c)!/(l+c-i)! delta^(l+c-i), whose delta powers split off
    // as row and column scalings. This avoids the cancellation a direct
    // k x k elimination suffers when xi1 and xi2 nearly coincide.
    const double delta = xi2 - xi1;
    if (delta == 0.0) return 0.0;
    const int m = k - l;
    Mat minor(m, m);
    for (int i = 1; i <= m; ++i) {
        for (int c = 1; c <= m; ++c) {
            if (i > l + c) {
                minor(i - 1, c - 1) = 0.0;
                continue;
            }
            double coeff = 1.0;  // (l+c)!/(l+c-i)!
            for (int t = l + c; t > l + c - i; --t) coeff *= t;
            minor(i - 1, c - 1) = coeff;
        }
    }
    double value = std::fabs(determinant(std::move(minor)));
    for (int i = 1; i <= l; ++i) value *= factorial(i);
    return value * std::pow(std::fabs(delta), l * (k - l));
}

BigInt transversality_constant_exact(int k, int l) {
    if (k < 1) throw std::invalid_argument("degree k must be >= 1");
    if (l < 1 || l >= k) throw std::invalid_argument("split l must be in [1,k-1]");
    BigInt binom = 1;
    for (int i = 1; i <= l; ++i) binom = binom * (k - l + i) / i;
    BigInt value = binom;
    BigInt f = 1;
    for (int i = 1; i <= l; ++i) value *= (f *= i);
    f = 1;
    for (int j = 1; j <= k - l; ++j) value *= (f *= j);
    return value;
}

double projected_torsion(int k, int l, double xi_prime, std::span<const double> grid) {
    check_degree(k);
    if (l < 1 || l >= k) throw std::invalid_argument("split l must be in [1,k-1]");
    if (grid.empty()) throw std::invalid_argument("empty evaluation grid");
    std::vector<Vec> tangent;
    for (int i = 1; i <= k - l; ++i) tangent.push_back(curve_derivative(k, i, xi_prime));
    const std::vector<Vec> basis = orthonormalize(tangent);
    double min_value = std::numeric_limits<double>::infinity();
    for (double xi : grid) {
        std::vector<Vec> projected;
        projected.reserve(l);
        for (int i = 1; i <= l; ++i) {
            Vec v = curve_derivative(k, i, xi);
            for (const Vec& q : basis) v = sub(std::move(v), scale(q, dot(v, q)));
            projected.push_back(std::move(v));
        }
        min_value = std::min(min_value, wedge_volume(projected));
    }
    return min_value;
}

} // namespace vinodec
