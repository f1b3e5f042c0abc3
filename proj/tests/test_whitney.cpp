#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "whitney.hpp"

using namespace vinodec;

namespace {

// Independent oracle: paint every square onto the 2^N x 2^N cell grid and
// demand each cell is covered exactly once. At the finest level all squares
// decompose exactly into cells, so this checks area and disjointness at once.
bool paints_exactly_once(const std::vector<WhitneySquare>& squares, int N) {
    const std::size_t side = std::size_t{1} << N;
    std::vector<std::uint8_t> cells(side * side, 0);
    for (const WhitneySquare& sq : squares) {
        const int up1 = N - sq.first.level;
        const int up2 = N - sq.second.level;
        const std::uint64_t i0 = sq.first.index << up1;
        const std::uint64_t j0 = sq.second.index << up2;
        for (std::uint64_t di = 0; di < (std::uint64_t{1} << up1); ++di)
            for (std::uint64_t dj = 0; dj < (std::uint64_t{1} << up2); ++dj) {
                std::uint8_t& cell = cells[(i0 + di) * side + (j0 + dj)];
                if (cell) return false;
                cell = 1;
            }
    }
    return std::all_of(cells.begin(), cells.end(),
                       [](std::uint8_t c) { return c == 1; });
}

std::set<std::pair<std::uint64_t, std::uint64_t>> index_pairs(
    const std::vector<WhitneySquare>& squares) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> out;
    for (const WhitneySquare& sq : squares)
        out.insert({sq.first.index, sq.second.index});
    return out;
}

} // namespace

TEST_CASE("off-diagonal family at level 2") {
    const auto family = whitney_offdiagonal(2);
    CHECK(family.size() == 6);
    const auto pairs = index_pairs(family);
    const std::set<std::pair<std::uint64_t, std::uint64_t>> expected = {
        {0, 2}, {2, 0}, {1, 3}, {3, 1}, {0, 3}, {3, 0}};
    CHECK(pairs == expected);
    CHECK_THROWS_AS(whitney_offdiagonal(1), std::invalid_argument);
}

TEST_CASE("off-diagonal family at level 3 drops squares covered at level 2") {
    const auto family = whitney_offdiagonal(3);
    CHECK(family.size() == 18);
    const auto pairs = index_pairs(family);
    // candidates (1,4),(4,1),(3,6),(6,3) sit inside level-2 squares
    CHECK(pairs.count({1, 4}) == 0);
    CHECK(pairs.count({4, 1}) == 0);
    CHECK(pairs.count({3, 6}) == 0);
    CHECK(pairs.count({6, 3}) == 0);
    CHECK(pairs.count({1, 3}) == 1);
}

TEST_CASE("off-diagonal families are symmetric") {
    for (int n = 2; n <= 7; ++n) {
        const auto pairs = index_pairs(whitney_offdiagonal(n));
        for (const auto& [i, j] : pairs) CHECK(pairs.count({j, i}) == 1);
    }
}

TEST_CASE("diagonal family counts 3*2^N - 2 pairs") {
    CHECK(whitney_diagonal(2).size() == 10);
    CHECK(whitney_diagonal(3).size() == 22);
    for (int N = 2; N <= 8; ++N) {
        const auto family = whitney_diagonal(N);
        CHECK(family.size() == 3 * (std::size_t{1} << N) - 2);
        const auto pairs = index_pairs(family);
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << N); ++i)
            CHECK(pairs.count({i, i}) == 1);
    }
}

TEST_CASE("cover at level 2 has 16 squares of total area 1") {
    const auto cover = whitney_cover(2);
    CHECK(cover.size() == 16);
    CHECK(cover_area(cover) == Rational(1));
}

TEST_CASE("cover tiles the square exactly") {
    for (int N = 2; N <= 9; ++N) {
        const auto cover = whitney_cover(N);
        CHECK(cover_area(cover) == Rational(1));
        CHECK(interiors_disjoint(cover));
        CHECK(paints_exactly_once(cover, N));
    }
}

TEST_CASE("no square is contained in a coarser family square") {
    for (int N = 3; N <= 8; ++N) {
        std::vector<std::vector<WhitneySquare>> families;
        for (int n = 2; n <= N; ++n) families.push_back(whitney_offdiagonal(n));
        for (std::size_t fine = 1; fine < families.size(); ++fine)
            for (const WhitneySquare& sq : families[fine])
                for (std::size_t coarse = 0; coarse < fine; ++coarse)
                    for (const WhitneySquare& big : families[coarse]) {
                        const bool contained = big.first.contains(sq.first) &&
                                               big.second.contains(sq.second);
                        CHECK_FALSE(contained);
                    }
    }
}

TEST_CASE("multiplicity bounds") {
    const MultiplicityReport r4 = multiplicity_report(4);
    CHECK(r4.max_diagonal == 6);
    REQUIRE(r4.max_offdiagonal.size() == 3);  // levels 2, 3, 4
    CHECK(r4.max_offdiagonal[1] <= 8);

    for (int N = 2; N <= 10; ++N) {
        const MultiplicityReport r = multiplicity_report(N);
        CHECK(r.max_diagonal <= 6);
        for (int bound : r.max_offdiagonal) CHECK(bound <= 8);
    }

    // boundary interval [0,1/4] at N=2 sits in 4 diagonal pairs
    int slots = 0;
    for (const WhitneySquare& sq : whitney_diagonal(2)) {
        if (sq.first.index == 0) ++slots;
        if (sq.second.index == 0) ++slots;
    }
    CHECK(slots == 4);
}

TEST_CASE("refinement only changes the diagonal strip") {
    for (int N = 2; N <= 8; ++N) {
        const double strip = 2.0 * std::ldexp(1.0, -N);
        const auto away = [&](const std::vector<WhitneySquare>& squares) {
            std::set<std::tuple<int, std::uint64_t, std::uint64_t>> keep;
            for (const WhitneySquare& sq : squares)
                if (dyadic_distance(sq.first, sq.second) >= strip)
                    keep.insert({sq.first.level, sq.first.index, sq.second.index});
            return keep;
        };
        CHECK(away(whitney_cover(N)) == away(whitney_cover(N + 1)));
    }
}
