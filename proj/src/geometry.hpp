#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyadic.hpp"
#include "linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace vinodec {

using BigInt = boost::multiprecision::cpp_int;

/// Anisotropic box: { center + sum_i t_i * half_widths[i] * axes.row(i), |t_i| <= 1 }.
/// Axis rows are direction vectors, not normalized.
struct Parallelepiped {
    Vec center;
    Mat axes;
    Vec half_widths;

    std::size_t dim() const { return center.size(); }
    double volume() const;
    /// 2^k corners, ordered by sign mask: bit i set means t_i = +1.
    std::vector<Vec> vertices() const;
};

/// x -> linear * x + translation. The linear part of the moment-curve
/// rescaling map is lower triangular, which apply_inverse exploits.
struct AffineMap {
    Mat linear;
    Vec translation;

    Vec apply(const Vec& x) const;
    Vec apply_inverse(const Vec& x) const;
};

// Degree guard for all floating-point geometry (factorial conditioning).
inline constexpr int kMaxGeometryDegree = 8;

/// (xi, xi^2, ..., xi^k).
Vec moment_curve(int k, double xi);

/// i-th derivative of the moment curve: component j is j!/(j-i)! * xi^(j-i).
Vec curve_derivative(int k, int order, double xi);

/// Partition of I into the dyadic intervals of the largest dyadic length <= delta.
std::vector<DyadicInterval> dyadic_partition(const DyadicInterval& I, double delta);

/// Arc-count helper: the level used by dyadic_partition, smallest n with 2^-n <= delta.
int partition_level(double delta);

/// Cap around Gamma(c_J): axes d^i Gamma(c_J), half-widths |J|^i.
Parallelepiped cap(const DyadicInterval& J, int k);

/// Box polar to cap(I,k), centered at the origin.
Parallelepiped polar_box(const DyadicInterval& I, int k);

/// Minkowski gauge of the polar box: max_i |<x, d^i Gamma(c_I)>| * |I|^i.
/// x lies in C * polar_box iff gauge <= C.
double polar_box_gauge(const DyadicInterval& I, int k, std::span<const double> x);

double polar_box_volume(const DyadicInterval& I, int k);

/// L1-normalized bump adapted to the polar box:
/// |box|^-1 * max(1, gauge(x))^(-10k).
double bump(const DyadicInterval& I, int k, std::span<const double> x);

/// Affine rescaling A_I with A_I Gamma(t) = Gamma(a + t*kappa) for I = [a, a+kappa].
AffineMap affine_map(const DyadicInterval& I, int k);

/// Maps the vertices of cap(J) through A_I^-1 and returns the max distance
/// to the matching vertices of cap(J_I), J_I = kappa^-1 (J - a).
double verify_cap_rescaling(const DyadicInterval& I, const DyadicInterval& J, int k);

/// sqrt(det Gram) for m <= k vectors; |det| of the stacked matrix when m = k.
double wedge_volume(const std::vector<Vec>& vectors);

/// Wedge volume of (d^1..d^l Gamma(xi1), d^1..d^(k-l) Gamma(xi2)).
/// Equals binom(k,l) * (prod_{i<=l} i!) * (prod_{j<=k-l} j!) * |xi1-xi2|^(l(k-l)).
double transversality_value(int k, int l, double xi1, double xi2);

/// The exact integer constant of the transversality identity at |xi1-xi2| = 1.
BigInt transversality_constant_exact(int k, int l);

/// Min over the grid of the wedge volume of d^1..d^l Gamma(xi) projected onto
/// the orthogonal complement of span(d^1..d^(k-l) Gamma(xi_prime)).
double projected_torsion(int k, int l, double xi_prime, std::span<const double> grid);

} // namespace vinodec
