#include "counting.hpp"

#include "powersum_layout.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace vinodec {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using detail::checked_pow;
using detail::KeyLayout;

template <class Count>
using SortedHist = detail::SortedDist<Count>;

constexpr u64 kDenseCells = u64{1} << 23;  // dense block scratch cap (64 MiB of u64)

void check_params(std::uint32_t N, std::uint32_t s, std::uint32_t k) {
    if (N < 1 || s < 1 || k < 1)
        throw std::invalid_argument("N, s and k must all be >= 1");
}

BigInt bigint_from_u128(u128 v) {
    BigInt hi = static_cast<u64>(v >> 64);
    return (hi << 64) + static_cast<u64>(v);
}

template <class Count>
SortedHist<Count> build_half(std::uint32_t N, std::uint32_t rounds,
                             const KeyLayout& layout, u64 budget_bytes) {
    if (static_cast<u64>(N) * (sizeof(u128) + sizeof(Count)) > budget_bytes)
        throw ResourceError("base histogram over budget", N, budget_bytes);
    std::vector<u128> base_keys;
    base_keys.reserve(N);
    for (u64 n = 1; n <= N; ++n) base_keys.push_back(layout.key_of_point(n));
    const std::vector<Count> base_values(N, Count(1));
    SortedHist<Count> h;
    h.keys = base_keys;  // ascending in n, hence sorted
    h.values = base_values;
    for (std::uint32_t r = 1; r < rounds; ++r)
        h = detail::convolve_with_base(h, base_keys, base_values, budget_bytes);
    return h;
}

// Entries grouped by the leading digit; group g spans [begin[g], begin[g+1]).
struct Groups {
    std::vector<u64> e1;
    std::vector<std::size_t> begin;

    template <class Count>
    static Groups make(const SortedHist<Count>& h, const KeyLayout& layout) {
        Groups g;
        for (std::size_t i = 0; i < h.size();) {
            const u64 lead = static_cast<u64>(h.keys[i] / layout.rest_space);
            g.e1.push_back(lead);
            g.begin.push_back(i);
            while (i < h.size() &&
                   static_cast<u64>(h.keys[i] / layout.rest_space) == lead)
                ++i;
        }
        g.begin.push_back(h.size());
        return g;
    }

    // Index of the group with leading digit `value`, or npos.
    std::size_t find(u64 value) const {
        const auto it = std::lower_bound(e1.begin(), e1.end(), value);
        if (it == e1.end() || *it != value) return npos;
        return static_cast<std::size_t>(it - e1.begin());
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct BlockResult {
    u128 sum_squares = 0;
    u64 mass = 0;
    u64 distinct = 0;
};

struct BigBlockResult {
    BigInt sum_squares;
    BigInt mass;
    u64 distinct = 0;
};

// Fast path: counts provably fit u64 since sum_v r(v) = N^s < 2^63.
CountResult count_fast(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                       u64 budget_bytes, unsigned threads) {
    const KeyLayout layout = KeyLayout::make(N, s, k);
    const std::uint32_t half_a = s / 2;
    const std::uint32_t half_b = s - half_a;
    const SortedHist<u64> hb = build_half<u64>(N, half_b, layout, budget_bytes);
    const SortedHist<u64> ha =
        half_a == half_b ? hb : build_half<u64>(N, half_a, layout, budget_bytes);

    std::vector<u64> rest_a(ha.size()), rest_b(hb.size());
    const bool rest_fits_u64 = layout.rest_space <= (u128{1} << 63);
    if (rest_fits_u64) {
        for (std::size_t i = 0; i < ha.size(); ++i)
            rest_a[i] = static_cast<u64>(ha.keys[i] % layout.rest_space);
        for (std::size_t i = 0; i < hb.size(); ++i)
            rest_b[i] = static_cast<u64>(hb.keys[i] % layout.rest_space);
    }

    const Groups ga = Groups::make(ha, layout);
    const Groups gb = Groups::make(hb, layout);

    // Output blocks by leading digit. Tuple sums attain every integer
    // between the extremes, so the range is contiguous.
    std::vector<u64> block_values;
    for (u64 t = ga.e1.front() + gb.e1.front(); t <= ga.e1.back() + gb.e1.back(); ++t)
        block_values.push_back(t);

    const bool dense = rest_fits_u64 && layout.rest_space <= kDenseCells &&
                       layout.rest_space * sizeof(u64) <= budget_bytes;

    std::vector<BlockResult> results(block_values.size());
    std::atomic<std::size_t> next_block{0};

    const auto worker = [&]() {
        std::vector<u64> scratch;
        if (dense) scratch.assign(static_cast<u64>(layout.rest_space), 0);
        std::vector<std::pair<u128, u64>> pairs;
        for (;;) {
            const std::size_t bi = next_block.fetch_add(1);
            if (bi >= block_values.size()) break;
            const u64 target = block_values[bi];
            BlockResult res;
            if (dense) {
                u64 lo = static_cast<u64>(layout.rest_space), hi = 0;
                for (std::size_t i = 0; i < ga.e1.size(); ++i) {
                    if (ga.e1[i] > target) break;
                    const std::size_t j = gb.find(target - ga.e1[i]);
                    if (j == Groups::npos) continue;
                    for (std::size_t p = ga.begin[i]; p < ga.begin[i + 1]; ++p) {
                        const u64 ra = rest_a[p];
                        const u64 ca = ha.values[p];
                        for (std::size_t q = gb.begin[j]; q < gb.begin[j + 1]; ++q) {
                            const u64 idx = ra + rest_b[q];
                            scratch[idx] += ca * hb.values[q];
                            lo = std::min(lo, idx);
                            hi = std::max(hi, idx);
                        }
                    }
                }
                for (u64 idx = lo; idx <= hi && lo <= hi; ++idx) {
                    const u64 r = scratch[idx];
                    if (r == 0) continue;
                    scratch[idx] = 0;
                    res.sum_squares += static_cast<u128>(r) * r;
                    res.mass += r;
                    ++res.distinct;
                }
            } else {
                pairs.clear();
                for (std::size_t i = 0; i < ga.e1.size(); ++i) {
                    if (ga.e1[i] > target) break;
                    const std::size_t j = gb.find(target - ga.e1[i]);
                    if (j == Groups::npos) continue;
                    const u64 added = (ga.begin[i + 1] - ga.begin[i]) *
                                      (gb.begin[j + 1] - gb.begin[j]);
                    if ((pairs.size() + added) * sizeof(pairs[0]) > budget_bytes)
                        throw ResourceError("convolution block over budget",
                                            pairs.size() + added, budget_bytes);
                    for (std::size_t p = ga.begin[i]; p < ga.begin[i + 1]; ++p) {
                        const u128 ra = rest_fits_u64 ? rest_a[p]
                                                      : ha.keys[p] % layout.rest_space;
                        for (std::size_t q = gb.begin[j]; q < gb.begin[j + 1]; ++q) {
                            const u128 rb = rest_fits_u64
                                                ? rest_b[q]
                                                : hb.keys[q] % layout.rest_space;
                            pairs.emplace_back(ra + rb, ha.values[p] * hb.values[q]);
                        }
                    }
                }
                std::sort(pairs.begin(), pairs.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                for (std::size_t i = 0; i < pairs.size();) {
                    const u128 key = pairs[i].first;
                    u64 r = 0;
                    for (; i < pairs.size() && pairs[i].first == key; ++i)
                        r += pairs[i].second;
                    res.sum_squares += static_cast<u128>(r) * r;
                    res.mass += r;
                    ++res.distinct;
                }
            }
            results[bi] = res;
        }
    };

    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, block_values.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    u128 total_squares = 0;
    u128 total_mass = 0;
    u64 total_distinct = 0;
    for (const BlockResult& r : results) {
        total_squares += r.sum_squares;
        total_mass += r.mass;
        total_distinct += r.distinct;
    }
    u128 expected_mass = 0;
    checked_pow(N, s, u128{1} << 127, expected_mass);
    if (total_mass != expected_mass)
        throw std::logic_error("mass conservation violated in counting engine");

    CountResult out;
    out.J = bigint_from_u128(total_squares);
    out.distinct_vectors = total_distinct;
    return out;
}

// Arbitrary-precision path for parameters whose counts may exceed 64 bits.
CountResult count_big(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                      u64 budget_bytes) {
    const KeyLayout layout = KeyLayout::make(N, s, k);
    const std::uint32_t half_a = s / 2;
    const std::uint32_t half_b = s - half_a;
    const SortedHist<BigInt> hb = build_half<BigInt>(N, half_b, layout, budget_bytes);
    const SortedHist<BigInt> ha =
        half_a == half_b ? hb : build_half<BigInt>(N, half_a, layout, budget_bytes);

    const Groups ga = Groups::make(ha, layout);
    const Groups gb = Groups::make(hb, layout);

    BigBlockResult total;
    std::vector<std::pair<u128, BigInt>> pairs;
    std::vector<u64> targets;
    for (u64 t = ga.e1.front() + gb.e1.front(); t <= ga.e1.back() + gb.e1.back(); ++t)
        targets.push_back(t);

    for (u64 target : targets) {
        pairs.clear();
        for (std::size_t i = 0; i < ga.e1.size(); ++i) {
            if (ga.e1[i] > target) break;
            const std::size_t j = gb.find(target - ga.e1[i]);
            if (j == Groups::npos) continue;
            for (std::size_t p = ga.begin[i]; p < ga.begin[i + 1]; ++p)
                for (std::size_t q = gb.begin[j]; q < gb.begin[j + 1]; ++q) {
                    if ((pairs.size() + 1) * 48 > budget_bytes)
                        throw ResourceError("convolution block over budget",
                                            pairs.size() + 1, budget_bytes);
                    pairs.emplace_back((ha.keys[p] % layout.rest_space) +
                                           (hb.keys[q] % layout.rest_space),
                                       ha.values[p] * hb.values[q]);
                }
        }
        std::sort(pairs.begin(), pairs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < pairs.size();) {
            const u128 key = pairs[i].first;
            BigInt r = 0;
            for (; i < pairs.size() && pairs[i].first == key; ++i) r += pairs[i].second;
            total.sum_squares += r * r;
            total.mass += r;
            ++total.distinct;
        }
    }

    BigInt expected_mass = boost::multiprecision::pow(BigInt(N), s);
    if (total.mass != expected_mass)
        throw std::logic_error("mass conservation violated in counting engine");

    CountResult out;
    out.J = total.sum_squares;
    out.distinct_vectors = total.distinct;
    return out;
}

} // namespace

std::vector<std::uint64_t> power_sum_vector(std::span<const std::uint32_t> tuple, int k) {
    if (k < 1) throw std::invalid_argument("degree k must be >= 1");
    if (tuple.empty()) throw std::invalid_argument("tuple must be nonempty");
    std::uint32_t max_entry = 0;
    for (std::uint32_t n : tuple) {
        if (n < 1) throw std::invalid_argument("tuple entries must be >= 1");
        max_entry = std::max(max_entry, n);
    }
    u128 top = 0;
    if (!checked_pow(max_entry, k, u128{1} << 63, top) ||
        top * tuple.size() >= (u128{1} << 63))
        throw ResourceError("power sums exceed 64-bit range", 0, 0);
    std::vector<std::uint64_t> v(k, 0);
    for (std::uint32_t n : tuple) {
        u64 p = 1;
        for (int j = 0; j < k; ++j) {
            p *= n;
            v[j] += p;
        }
    }
    return v;
}

std::size_t PowerSumHistogram::VectorKeyHash::operator()(
    const std::vector<std::uint64_t>& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (std::uint64_t x : v) {
        h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t PowerSumHistogram::pack(std::span<const std::uint64_t> v) const {
    u64 key = 0;
    for (std::uint32_t j = 0; j < k_; ++j) key = key * bases_[j] + v[j];
    return key;
}

std::vector<std::uint64_t> PowerSumHistogram::unpack(std::uint64_t key) const {
    std::vector<std::uint64_t> v(k_);
    for (int j = k_ - 1; j >= 0; --j) {
        v[j] = key % bases_[j];
        key /= bases_[j];
    }
    return v;
}

PowerSumHistogram::PowerSumHistogram(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                                     std::uint64_t budget_bytes)
    : N_(N), s_(s), k_(k) {
    check_params(N, s, k);
    bases_.resize(k);
    for (std::uint32_t j = 1; j <= k; ++j) {
        u128 p = 0;
        if (!checked_pow(N, j, (u128{1} << 64) / s, p))
            throw ResourceError("power-sum digits exceed 64 bits", 0, 0);
        bases_[j - 1] = static_cast<u64>(s * p + 1);
    }
    u128 key_space = 1;
    packed_ = true;
    for (u64 b : bases_) {
        key_space *= b;
        if (key_space >> 64) {
            packed_ = false;
            break;
        }
    }

    // s rounds of folding the single-point distribution into the table.
    const std::size_t entry_cost = packed_ ? 96 : 96 + k * sizeof(std::uint64_t);
    std::vector<std::vector<std::uint64_t>> points;
    for (std::uint64_t n = 1; n <= N; ++n) {
        std::vector<std::uint64_t> v(k);
        u64 p = 1;
        for (std::uint32_t j = 0; j < k; ++j) {
            p *= n;
            v[j] = p;
        }
        points.push_back(std::move(v));
    }

    const auto step = [&](auto& table) {
        std::remove_reference_t<decltype(table)> next;
        const u64 upper = static_cast<u64>(table.size()) * N;
        if (upper * entry_cost > budget_bytes)
            throw ResourceError("histogram support over memory budget", upper,
                                budget_bytes);
        next.reserve(table.size() * 2);
        for (const auto& [key, count] : table) {
            for (const auto& pt : points) {
                if constexpr (std::is_same_v<std::decay_t<decltype(key)>, u64>) {
                    std::vector<std::uint64_t> v = unpack(key);
                    for (std::uint32_t j = 0; j < k_; ++j) v[j] += pt[j];
                    next[pack(v)] += count;
                } else {
                    std::vector<std::uint64_t> v = key;
                    for (std::uint32_t j = 0; j < k_; ++j) v[j] += pt[j];
                    next[std::move(v)] += count;
                }
            }
        }
        table = std::move(next);
    };

    if (packed_) {
        for (const auto& pt : points) packed_table_[pack(pt)] = 1;
        for (std::uint32_t round = 1; round < s; ++round) step(packed_table_);
    } else {
        for (const auto& pt : points) vector_table_[pt] = 1;
        for (std::uint32_t round = 1; round < s; ++round) step(vector_table_);
    }
}

std::uint64_t PowerSumHistogram::distinct() const {
    return packed_ ? packed_table_.size() : vector_table_.size();
}

BigInt PowerSumHistogram::total_mass() const {
    BigInt mass = 0;
    if (packed_)
        for (const auto& [key, count] : packed_table_) mass += count;
    else
        for (const auto& [key, count] : vector_table_) mass += count;
    return mass;
}

BigInt PowerSumHistogram::count_of(std::span<const std::uint64_t> v) const {
    if (v.size() != k_) throw std::invalid_argument("vector dimension must equal k");
    if (packed_) {
        const auto it = packed_table_.find(pack(v));
        return it == packed_table_.end() ? BigInt(0) : it->second;
    }
    const auto it = vector_table_.find(std::vector<std::uint64_t>(v.begin(), v.end()));
    return it == vector_table_.end() ? BigInt(0) : it->second;
}

BigInt PowerSumHistogram::sum_of_squares() const {
    BigInt j = 0;
    if (packed_)
        for (const auto& [key, count] : packed_table_) j += count * count;
    else
        for (const auto& [key, count] : vector_table_) j += count * count;
    return j;
}

void PowerSumHistogram::for_each(
    const std::function<void(const std::vector<std::uint64_t>&, const BigInt&)>& fn)
    const {
    if (packed_)
        for (const auto& [key, count] : packed_table_) fn(unpack(key), count);
    else
        for (const auto& [key, count] : vector_table_) fn(key, count);
}

PowerSumHistogram build_histogram(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                                  std::uint64_t budget_bytes) {
    return PowerSumHistogram(N, s, k, budget_bytes);
}

CountResult vinogradov_count(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                             std::uint64_t budget_bytes, unsigned threads) {
    check_params(N, s, k);
    const auto start = std::chrono::steady_clock::now();
    CountResult out;
    if (s == 1) {
        // One equation set forces n = m; each of the N vectors is distinct.
        out.J = N;
        out.distinct_vectors = N;
    } else {
        bool keys_fit_u128 = true;
        {
            u128 key_space = 1;
            for (std::uint32_t j = 1; j <= k && keys_fit_u128; ++j) {
                u128 p = 0;
                if (!checked_pow(N, j, (u128{1} << 64) / s, p))
                    throw ResourceError("power-sum digits exceed 64 bits", 0, 0);
                const u128 base = s * p + 1;
                if (key_space > (((u128{1} << 126)) - 1) / base) keys_fit_u128 = false;
                key_space *= base;
            }
        }
        if (!keys_fit_u128) {
            // Rare high-degree regime: fall back to the materialized table.
            const PowerSumHistogram h(N, s, k, budget_bytes);
            out.J = h.sum_of_squares();
            out.distinct_vectors = h.distinct();
        } else {
            u128 mass = 0;
            const bool fast = checked_pow(N, s, u128{1} << 63, mass);
            out = fast ? count_fast(N, s, k, budget_bytes, threads)
                       : count_big(N, s, k, budget_bytes);
        }
    }
    out.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return out;
}

BigInt brute_force_count(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                         std::uint64_t budget_tuples) {
    check_params(N, s, k);
    u128 tuples = 0;
    if (!checked_pow(N, 2 * s, budget_tuples, tuples))
        throw ResourceError("brute-force enumeration over budget", 0, budget_tuples);
    u128 top = 0;
    if (!checked_pow(N, k, (u128{1} << 63) / (2 * s), top))
        throw ResourceError("power sums exceed 64-bit range", 0, 0);

    std::vector<std::vector<u64>> pw(N + 1, std::vector<u64>(k + 1, 1));
    for (std::uint32_t n = 1; n <= N; ++n)
        for (std::uint32_t j = 1; j <= k; ++j) pw[n][j] = pw[n][j - 1] * n;

    const std::uint32_t len = 2 * s;
    std::vector<std::uint32_t> digits(len, 1);
    BigInt solutions = 0;
    for (;;) {
        bool equal = true;
        for (std::uint32_t j = 1; j <= k && equal; ++j) {
            u64 left = 0, right = 0;
            for (std::uint32_t i = 0; i < s; ++i) left += pw[digits[i]][j];
            for (std::uint32_t i = s; i < len; ++i) right += pw[digits[i]][j];
            equal = left == right;
        }
        if (equal) ++solutions;
        std::uint32_t pos = 0;
        while (pos < len && digits[pos] == N) digits[pos++] = 1;
        if (pos == len) break;
        ++digits[pos];
    }
    return solutions;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return std::nan("");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

ScanResult mean_value_scan(std::span<const std::uint32_t> N_list, std::uint32_t s,
                           std::uint32_t k, std::uint64_t budget_bytes,
                           unsigned threads) {
    ScanResult result;
    std::vector<double> log_N, log_J, log_rho;
    for (std::uint32_t N : N_list) {
        ScanRow row;
        row.N = N;
        try {
            CountResult cell = vinogradov_count(N, s, k, budget_bytes, threads);
            row.ok = true;
            row.J = cell.J;
            row.distinct_vectors = cell.distinct_vectors;
            row.elapsed_ms = cell.elapsed_ms;
            const double j = cell.J.convert_to<double>();
            const int critical = static_cast<int>(k) * (static_cast<int>(k) + 1) / 2;
            const double exponent =
                std::max(0.0, 2.0 * s - critical);
            const double denom = std::pow(double(N), double(s)) +
                                 std::pow(double(N), exponent);
            row.rho = j / denom;
            log_N.push_back(std::log(double(N)));
            log_J.push_back(std::log(j));
            log_rho.push_back(std::log(row.rho));
        } catch (const ResourceError&) {
            row.ok = false;
            row.error_class = "resource";
        }
        result.rows.push_back(std::move(row));
    }
    result.slope_log_J = least_squares_slope(log_N, log_J);
    result.slope_log_rho = least_squares_slope(log_N, log_rho);
    return result;
}

} // namespace vinodec
