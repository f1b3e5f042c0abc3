#pragma once

// Shared machinery for s-fold convolutions of power-sum distributions.
// Used by the exact counting engine (integer counts) and by the torus
// moment identity path (complex amplitudes).

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace vinodec::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// base^exp, or false if it reaches `limit`.
inline bool checked_pow(u128 base, std::uint32_t exp, u128 limit, u128& out) {
    u128 r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > (limit - 1) / base) return false;
        r *= base;
    }
    out = r;
    return true;
}

// Mixed-radix layout for power-sum vectors: digit j has base s*N^j + 1 and the
// leading coordinate (j = 1) sits in the most significant position, so keys
// sorted numerically are grouped by it. Digit sums of two half-vectors never
// carry, hence keys of halves add directly.
struct KeyLayout {
    std::uint32_t k = 0;
    std::vector<u64> bases;         // bases[j-1] = s*N^j + 1
    std::vector<u128> multipliers;  // multipliers[j-1], descending significance
    u128 rest_space = 1;            // product of bases for j >= 2

    static KeyLayout make(std::uint32_t N, std::uint32_t s, std::uint32_t k) {
        KeyLayout layout;
        layout.k = k;
        layout.bases.resize(k);
        u128 p = 1;
        for (std::uint32_t j = 1; j <= k; ++j) {
            if (!checked_pow(N, j, (u128{1} << 64) / s, p))
                throw ResourceError("power-sum digits exceed 64 bits", 0, 0);
            layout.bases[j - 1] = static_cast<u64>(s * p + 1);
        }
        layout.multipliers.assign(k, 1);
        for (int j = static_cast<int>(k) - 1; j >= 1; --j) {
            const u128 next = layout.multipliers[j] * layout.bases[j];
            if (next >> 126)
                throw ResourceError("packed key space exceeds 128 bits", 0, 0);
            layout.multipliers[j - 1] = next;
        }
        layout.rest_space = layout.multipliers[0];
        return layout;
    }

    u128 key_of_point(u64 n) const {
        u128 key = 0;
        u64 p = 1;
        for (std::uint32_t j = 0; j < k; ++j) {
            p *= n;
            key += multipliers[j] * p;
        }
        return key;
    }
};

template <class Value>
struct SortedDist {
    std::vector<u128> keys;
    std::vector<Value> values;

    std::size_t size() const { return keys.size(); }
};

template <class Value>
SortedDist<Value> convolve_with_base(const SortedDist<Value>& h,
                                     const std::vector<u128>& base_keys,
                                     const std::vector<Value>& base_values,
                                     u64 budget_bytes) {
    const u64 generated = static_cast<u64>(h.size()) * base_keys.size();
    const u64 bytes = generated * (sizeof(u128) + sizeof(Value));
    if (bytes > budget_bytes || generated > (u64{1} << 33))
        throw ResourceError("histogram convolution over budget", generated,
                            budget_bytes);
    std::vector<std::pair<u128, Value>> buf;
    buf.reserve(generated);
    for (std::size_t b = 0; b < base_keys.size(); ++b)
        for (std::size_t i = 0; i < h.size(); ++i)
            buf.emplace_back(h.keys[i] + base_keys[b], h.values[i] * base_values[b]);
    std::sort(buf.begin(), buf.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SortedDist<Value> out;
    out.keys.reserve(buf.size());
    out.values.reserve(buf.size());
    for (std::size_t i = 0; i < buf.size();) {
        const u128 key = buf[i].first;
        Value total = std::move(buf[i].second);
        std::size_t j = i + 1;
        for (; j < buf.size() && buf[j].first == key; ++j) total += buf[j].second;
        out.keys.push_back(key);
        out.values.push_back(std::move(total));
        i = j;
    }
    return out;
}

} // namespace vinodec::detail
