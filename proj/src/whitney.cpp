#include "whitney.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace vinodec {

namespace {

void check_level(int n) {
    if (n < 2) throw std::invalid_argument("Whitney level must be >= 2");
    if (n > 30) throw std::invalid_argument("Whitney level must be <= 30");
}

// Index gap between closed level-n intervals i and j, in units of 2^-n.
std::uint64_t index_gap(std::uint64_t i, std::uint64_t j) {
    const std::uint64_t d = i > j ? i - j : j - i;
    return d == 0 ? 0 : d - 1;
}

// Families W_2..W_n, built iteratively with the containment exclusion.
std::vector<std::vector<WhitneySquare>> offdiagonal_families(int n) {
    std::vector<std::vector<WhitneySquare>> families;  // families[t] is W_{t+2}
    std::vector<std::set<std::pair<std::uint64_t, std::uint64_t>>> keys;
    for (int m = 2; m <= n; ++m) {
        std::vector<WhitneySquare> family;
        const std::uint64_t count = std::uint64_t{1} << m;
        for (std::uint64_t i = 0; i < count; ++i) {
            for (std::uint64_t j = 0; j < count; ++j) {
                const std::uint64_t gap = index_gap(i, j);
                if (gap != 1 && gap != 2) continue;
                bool covered = false;
                for (int prev = 2; prev < m && !covered; ++prev)
                    covered = keys[prev - 2].count(
                        {i >> (m - prev), j >> (m - prev)}) != 0;
                if (covered) continue;
                family.push_back({DyadicInterval(m, i), DyadicInterval(m, j), false});
            }
        }
        std::set<std::pair<std::uint64_t, std::uint64_t>> key_set;
        for (const WhitneySquare& sq : family)
            key_set.insert({sq.first.index, sq.second.index});
        families.push_back(std::move(family));
        keys.push_back(std::move(key_set));
    }
    return families;
}

} // namespace

std::vector<WhitneySquare> whitney_offdiagonal(int n) {
    check_level(n);
    return offdiagonal_families(n).back();
}

std::vector<WhitneySquare> whitney_diagonal(int N) {
    check_level(N);
    std::vector<WhitneySquare> family;
    const std::uint64_t count = std::uint64_t{1} << N;
    for (std::uint64_t i = 0; i < count; ++i) {
        family.push_back({DyadicInterval(N, i), DyadicInterval(N, i), true});
        if (i + 1 < count) {
            family.push_back({DyadicInterval(N, i), DyadicInterval(N, i + 1), true});
            family.push_back({DyadicInterval(N, i + 1), DyadicInterval(N, i), true});
        }
    }
    return family;
}

std::vector<WhitneySquare> whitney_cover(int N) {
    check_level(N);
    std::vector<WhitneySquare> cover;
    for (std::vector<WhitneySquare>& family : offdiagonal_families(N))
        cover.insert(cover.end(), family.begin(), family.end());
    const std::vector<WhitneySquare> diag = whitney_diagonal(N);
    cover.insert(cover.end(), diag.begin(), diag.end());
    return cover;
}

MultiplicityReport multiplicity_report(int N) {
    check_level(N);
    MultiplicityReport report;
    {
        std::map<std::uint64_t, int> slots;
        for (const WhitneySquare& sq : whitney_diagonal(N)) {
            ++slots[sq.first.index];
            ++slots[sq.second.index];
        }
        for (const auto& [idx, count] : slots)
            report.max_diagonal = std::max(report.max_diagonal, count);
    }
    for (const std::vector<WhitneySquare>& family : offdiagonal_families(N)) {
        std::map<std::uint64_t, int> slots;
        for (const WhitneySquare& sq : family) {
            ++slots[sq.first.index];
            ++slots[sq.second.index];
        }
        int worst = 0;
        for (const auto& [idx, count] : slots) worst = std::max(worst, count);
        report.max_offdiagonal.push_back(worst);
    }
    return report;
}

Rational cover_area(const std::vector<WhitneySquare>& squares) {
    Rational area = 0;
    for (const WhitneySquare& sq : squares) {
        Rational cell(1, boost::multiprecision::cpp_int(1) << (sq.first.level + sq.second.level));
        area += cell;
    }
    return area;
}

bool interiors_disjoint(const std::vector<WhitneySquare>& squares) {
    if (squares.empty()) return true;
    // Integer extents at the common refinement, swept along the x axis so
    // only pairs with overlapping x intervals are compared.
    int refinement = 0;
    for (const WhitneySquare& sq : squares)
        refinement = std::max({refinement, sq.first.level, sq.second.level});
    struct Extent {
        std::uint64_t x_lo, x_hi, y_lo, y_hi;
    };
    std::vector<Extent> extents;
    extents.reserve(squares.size());
    for (const WhitneySquare& sq : squares) {
        const int up1 = refinement - sq.first.level;
        const int up2 = refinement - sq.second.level;
        const std::uint64_t x_lo = sq.first.index << up1;
        const std::uint64_t y_lo = sq.second.index << up2;
        extents.push_back({x_lo, x_lo + (std::uint64_t{1} << up1), y_lo,
                           y_lo + (std::uint64_t{1} << up2)});
    }
    std::sort(extents.begin(), extents.end(),
              [](const Extent& a, const Extent& b) { return a.x_lo < b.x_lo; });
    for (std::size_t p = 0; p < extents.size(); ++p) {
        for (std::size_t q = p + 1;
             q < extents.size() && extents[q].x_lo < extents[p].x_hi; ++q) {
            if (extents[p].y_lo < extents[q].y_hi && extents[q].y_lo < extents[p].y_hi)
                return false;
        }
    }
    return true;
}

} // namespace vinodec
