#pragma once

#include <cstdint>
#include <vector>

#include "dyadic.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace vinodec {

using Rational = boost::multiprecision::cpp_rational;

/// One square I1 x I2 of the Whitney decomposition of [0,1]^2 around the
/// diagonal. Pairs are ordered throughout.
struct WhitneySquare {
    DyadicInterval first;
    DyadicInterval second;
    bool diagonal_class = false;  // member of the finest-level diagonal family

    int scale() const { return first.level; }
};

/// Off-diagonal family at level n: pairs with 2^n * dist in {1,2} whose square
/// is not contained in a square of any coarser off-diagonal family.
std::vector<WhitneySquare> whitney_offdiagonal(int n);

/// Diagonal family at level N: pairs with dist = 0 (equal or adjacent).
std::vector<WhitneySquare> whitney_diagonal(int N);

/// Union of the off-diagonal families at levels 2..N and the diagonal family
/// at level N; tiles the unit square exactly.
std::vector<WhitneySquare> whitney_cover(int N);

struct MultiplicityReport {
    int max_diagonal = 0;
    std::vector<int> max_offdiagonal;  // entry t is the bound at level t+2
};

/// Slot counts: how often a single interval can appear across the pairs,
/// counting both coordinates.
MultiplicityReport multiplicity_report(int N);

/// Sum of |I1| * |I2| in exact rational arithmetic.
Rational cover_area(const std::vector<WhitneySquare>& squares);

/// True when no two squares share interior points.
bool interiors_disjoint(const std::vector<WhitneySquare>& squares);

} // namespace vinodec
