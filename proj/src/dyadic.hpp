#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vinodec {

/// Dyadic subinterval [j*2^-n, (j+1)*2^-n] of [0,1], stored as (level n, index j).
/// All interval combinatorics (containment, adjacency, gaps) are done on the
/// integer pair, never in floating point.
struct DyadicInterval {
    int level = 0;            // n >= 0
    std::uint64_t index = 0;  // 0 <= j < 2^n

    static constexpr int kMaxLevel = 60;

    DyadicInterval() = default;
    DyadicInterval(int n, std::uint64_t j) : level(n), index(j) { validate(); }

    void validate() const {
        if (level < 0 || level > kMaxLevel)
            throw std::invalid_argument("dyadic interval level out of range [0," +
                                        std::to_string(kMaxLevel) + "]");
        if (index >> level != 0)
            throw std::invalid_argument("dyadic interval index must satisfy j < 2^n");
    }

    double length() const { return std::ldexp(1.0, -level); }
    double lower() const { return std::ldexp(static_cast<double>(index), -level); }
    double upper() const { return std::ldexp(static_cast<double>(index + 1), -level); }
    double center() const {
        return std::ldexp(static_cast<double>(2 * index + 1), -(level + 1));
    }

    /// Dyadic ancestry: does this interval contain J?
    bool contains(const DyadicInterval& other) const {
        if (other.level < level) return false;
        return (other.index >> (other.level - level)) == index;
    }

    bool operator==(const DyadicInterval& other) const = default;
};

/// Euclidean gap between the closed intervals; 0 for equal or adjacent.
/// Exact: the gap is an integer multiple of the finer interval length.
inline double dyadic_distance(const DyadicInterval& a, const DyadicInterval& b) {
    const int n = std::max(a.level, b.level);
    const std::uint64_t ia = a.index << (n - a.level);
    const std::uint64_t ja = ia + (std::uint64_t{1} << (n - a.level));  // [ia, ja]
    const std::uint64_t ib = b.index << (n - b.level);
    const std::uint64_t jb = ib + (std::uint64_t{1} << (n - b.level));
    std::uint64_t gap = 0;
    if (ja < ib)
        gap = ib - ja;
    else if (jb < ia)
        gap = ia - jb;
    return std::ldexp(static_cast<double>(gap), -n);
}

} // namespace vinodec
