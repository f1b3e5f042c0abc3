#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace vinodec {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultBudgetBytes = std::uint64_t{1} << 30;
inline constexpr std::uint64_t kDefaultBruteBudget = 10'000'000;

/// Power-sum vector of an s-tuple: component j is sum_i n_i^j, j = 1..k.
std::vector<std::uint64_t> power_sum_vector(std::span<const std::uint32_t> tuple, int k);

/// Multiplicity table r(v) = #{ tuples in [1,N]^s with power-sum vector v }.
/// Keys are packed into one 64-bit word via mixed radix (bases s*N^j + 1)
/// when the full product fits; otherwise stored as explicit vectors.
class PowerSumHistogram {
public:
    PowerSumHistogram(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                      std::uint64_t budget_bytes = kDefaultBudgetBytes);

    std::uint32_t N() const { return N_; }
    std::uint32_t s() const { return s_; }
    std::uint32_t k() const { return k_; }
    bool packed_keys() const { return packed_; }

    std::uint64_t distinct() const;
    BigInt total_mass() const;
    BigInt count_of(std::span<const std::uint64_t> v) const;
    BigInt sum_of_squares() const;

    void for_each(const std::function<void(const std::vector<std::uint64_t>&,
                                           const BigInt&)>& fn) const;

private:
    struct VectorKeyHash {
        std::size_t operator()(const std::vector<std::uint64_t>& v) const;
    };

    std::uint64_t pack(std::span<const std::uint64_t> v) const;
    std::vector<std::uint64_t> unpack(std::uint64_t key) const;

    std::uint32_t N_, s_, k_;
    bool packed_ = false;
    std::vector<std::uint64_t> bases_;
    std::unordered_map<std::uint64_t, BigInt> packed_table_;
    std::unordered_map<std::vector<std::uint64_t>, BigInt, VectorKeyHash> vector_table_;
};

PowerSumHistogram build_histogram(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                                  std::uint64_t budget_bytes = kDefaultBudgetBytes);

struct CountResult {
    BigInt J;
    std::uint64_t distinct_vectors = 0;
    double elapsed_ms = 0.0;
};

/// Exact J_{s,k}(N) = sum_v r(v)^2. Splits the tuple length in half and
/// streams the final convolution through blocks of the leading power-sum
/// coordinate, so the full histogram is never materialized.
CountResult vinogradov_count(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                             std::uint64_t budget_bytes = kDefaultBudgetBytes,
                             unsigned threads = 0);

/// Independent oracle: enumerates all 2s-tuples and checks the k equations.
BigInt brute_force_count(std::uint32_t N, std::uint32_t s, std::uint32_t k,
                         std::uint64_t budget_tuples = kDefaultBruteBudget);

struct ScanRow {
    std::uint32_t N = 0;
    bool ok = false;
    std::string error_class;  // empty, "resource", or "internal"
    BigInt J;
    double rho = 0.0;
    std::uint64_t distinct_vectors = 0;
    double elapsed_ms = 0.0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    double slope_log_J = 0.0;    // least-squares slope of log J vs log N
    double slope_log_rho = 0.0;  // same for log rho
};

/// Runs vinogradov_count over N_list; rho = J / (N^s + N^max(0, 2s - k(k+1)/2)).
/// Failed cells are recorded and skipped in the fits.
ScanResult mean_value_scan(std::span<const std::uint32_t> N_list, std::uint32_t s,
                           std::uint32_t k,
                           std::uint64_t budget_bytes = kDefaultBudgetBytes,
                           unsigned threads = 0);

/// Least-squares slope of y against x; NaN when fewer than 2 points.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

} // namespace vinodec
