#include "torus.hpp"

#include "powersum_layout.hpp"
#include "rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace vinodec {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_degree(int k) {
    if (k < 1 || k > 8) throw std::invalid_argument("degree k must be in [1,8]");
}

Complex unit_phase(double cycles) {
    const double arg = kTwoPi * (cycles - std::nearbyint(cycles));
    return {std::cos(arg), std::sin(arg)};
}

double integer_power(double base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Deterministic chunked reduction: chunk results are combined in index order
// with compensated addition, independent of how threads were scheduled.
double parallel_chunk_sum(std::size_t chunks, unsigned threads,
                          const std::function<double(std::size_t)>& chunk_sum) {
    std::vector<double> partial(chunks, 0.0);
    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, chunks));
    if (n_threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) partial[c] = chunk_sum(c);
    } else {
        std::atomic<std::size_t> next{0};
        const auto worker = [&]() {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) break;
                partial[c] = chunk_sum(c);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    double sum = 0.0, comp = 0.0;
    for (double v : partial) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

struct MomentResult {
    double value = 0.0;
    std::vector<u64> grid;  // empty when the identity path was used
};

std::vector<u64> quadrature_grid(int k, int s, std::uint32_t N) {
    std::vector<u64> m(k);
    for (int j = 1; j <= k; ++j) {
        u128 p = 0;
        if (!detail::checked_pow(N, j, (u128{1} << 62) / (2 * s), p))
            throw ResourceError("quadrature grid size overflows", 0, 0);
        m[j - 1] = 2 * static_cast<u64>(s) * static_cast<u64>(p) + 1;
    }
    return m;
}

// Work estimate: grid points times frequencies.
u128 quadrature_ops(const std::vector<u64>& grid, std::uint32_t N) {
    u128 total = N;
    for (u64 m : grid) {
        if (total > (u128{1} << 100)) return total;
        total *= m;
    }
    return total;
}

// Tensor-grid quadrature of |f|^{2s}. Node phases are computed from exact
// integer residues, so the only rounding is in the final trigonometry.
double quadrature_moment(int k, int s, const WeightSequence& w,
                         const std::vector<u64>& grid, unsigned threads) {
    const std::uint32_t N = w.N;
    const u64 m1 = grid[0];
    u64 outer_nodes = 1;
    for (int j = 1; j < k; ++j) outer_nodes *= grid[j];

    // Residues n^j mod M_j.
    std::vector<std::vector<u64>> residue(N + 1, std::vector<u64>(k));
    for (u64 n = 1; n <= N; ++n) {
        for (int j = 1; j <= k; ++j) {
            u128 p = 1;
            for (int i = 0; i < j; ++i) p = (p * n) % grid[j - 1];
            residue[n][j - 1] = static_cast<u64>(p);
        }
    }
    std::vector<Complex> rotator(N + 1);
    for (u64 n = 1; n <= N; ++n)
        rotator[n] = unit_phase(static_cast<double>(residue[n][0]) / m1);

    const std::size_t chunks = std::min<u64>(outer_nodes, 256);
    const double total = parallel_chunk_sum(
        chunks, threads, [&](std::size_t chunk) -> double {
            const u64 begin = outer_nodes * chunk / chunks;
            const u64 end = outer_nodes * (chunk + 1) / chunks;
            std::vector<Complex> phasor(N + 1);
            std::vector<u64> node(k, 0);
            double sum = 0.0, comp = 0.0;
            for (u64 lin = begin; lin < end; ++lin) {
                u64 rem = lin;
                for (int j = k - 1; j >= 1; --j) {
                    node[j] = rem % grid[j];
                    rem /= grid[j];
                }
                for (u64 n = 1; n <= N; ++n) {
                    double cycles = 0.0;
                    for (int j = 1; j < k; ++j) {
                        const u64 r = (static_cast<u128>(residue[n][j]) * node[j]) %
                                      grid[j];
                        cycles += static_cast<double>(r) / grid[j];
                    }
                    phasor[n] = w.a[n - 1] * unit_phase(cycles);
                }
                for (u64 t = 0; t < m1; ++t) {
                    Complex f = 0.0;
                    for (u64 n = 1; n <= N; ++n) f += phasor[n];
                    const double a2 = std::norm(f);
                    const double v = integer_power(a2, s);
                    const double y = v - comp;
                    const double tt = sum + y;
                    comp = (tt - sum) - y;
                    sum = tt;
                    if (t + 1 < m1)
                        for (u64 n = 1; n <= N; ++n) phasor[n] *= rotator[n];
                }
            }
            return sum;
        });

    double cell = 1.0;
    for (u64 m : grid) cell /= static_cast<double>(m);
    return total * cell;
}

double identity_moment(int k, int s, const WeightSequence& w, u64 budget_bytes) {
    // Constant weights reduce to the exact integer count.
    bool constant = true;
    for (const Complex& a : w.a)
        if (a != w.a[0]) {
            constant = false;
            break;
        }
    if (constant) {
        const double mod2 = std::norm(w.a[0]);
        if (mod2 == 0.0) return 0.0;
        const CountResult c = vinogradov_count(w.N, s, k, budget_bytes);
        return integer_power(mod2, s) * c.J.convert_to<double>();
    }

    const detail::KeyLayout layout = detail::KeyLayout::make(w.N, s, k);
    std::vector<u128> base_keys;
    std::vector<Complex> base_values;
    for (u64 n = 1; n <= w.N; ++n) {
        if (w.a[n - 1] == Complex(0.0, 0.0)) continue;
        base_keys.push_back(layout.key_of_point(n));
        base_values.push_back(w.a[n - 1]);
    }
    if (base_keys.empty()) return 0.0;
    detail::SortedDist<Complex> dist;
    dist.keys = base_keys;
    dist.values = base_values;
    for (int round = 1; round < s; ++round)
        dist = detail::convolve_with_base(dist, base_keys, base_values, budget_bytes);
    double sum = 0.0, comp = 0.0;
    for (const Complex& c : dist.values) {
        const double y = std::norm(c) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

MomentResult moment_engine(int k, int s, const WeightSequence& w,
                           u64 grid_ops_budget, u64 budget_bytes, unsigned threads,
                           bool quadrature_only) {
    check_degree(k);
    if (s < 1) throw std::invalid_argument("moment order s must be >= 1");
    if (w.N < 1 || w.a.size() != w.N)
        throw std::invalid_argument("weight sequence must carry N entries");
    const std::vector<u64> grid = quadrature_grid(k, s, w.N);
    const u128 ops = quadrature_ops(grid, w.N);
    if (ops <= grid_ops_budget) {
        MomentResult r;
        r.value = quadrature_moment(k, s, w, grid, threads);
        r.grid = grid;
        return r;
    }
    if (quadrature_only) {
        const u64 attempted =
            ops > (u128{1} << 63) ? UINT64_MAX : static_cast<u64>(ops);
        throw ResourceError(
            "quadrature grid over budget; use the histogram identity path "
            "(moment_identity)",
            attempted, grid_ops_budget);
    }
    MomentResult r;
    r.value = identity_moment(k, s, w, budget_bytes);
    return r;
}

} // namespace

WeightSequence WeightSequence::unit(std::uint32_t N) {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    WeightSequence w;
    w.N = N;
    w.a.assign(N, Complex(1.0, 0.0));
    return w;
}

WeightSequence WeightSequence::random_unimodular(std::uint32_t N, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    WeightSequence w;
    w.N = N;
    w.a.reserve(N);
    SplitMix64 rng(seed);
    for (std::uint32_t n = 0; n < N; ++n) {
        const double arg = kTwoPi * rng.next_double();
        w.a.emplace_back(std::cos(arg), std::sin(arg));
    }
    return w;
}

double WeightSequence::l2_norm_squared() const {
    double sum = 0.0;
    for (const Complex& c : a) sum += std::norm(c);
    return sum;
}

bool WeightSequence::is_unit() const {
    for (const Complex& c : a)
        if (c != Complex(1.0, 0.0)) return false;
    return true;
}

std::uint64_t arc_of_frequency(std::uint32_t n, std::uint32_t N, int level) {
    if (n < 1 || n > N) throw std::invalid_argument("frequency n must be in [1,N]");
    if (level < 0 || level > 30) throw std::invalid_argument("arc level out of range");
    // n/N in (m/2^level, (m+1)/2^level]; right endpoints go to the arc on the left.
    return ((static_cast<std::uint64_t>(n) << level) - 1) / N;
}

WeightSequence WeightSequence::masked_to_arc(const DyadicInterval& I) const {
    WeightSequence w;
    w.N = N;
    w.a.assign(N, Complex(0.0, 0.0));
    for (std::uint32_t n = 1; n <= N; ++n)
        if (arc_of_frequency(n, N, I.level) == I.index) w.a[n - 1] = a[n - 1];
    return w;
}

std::complex<double> eval_weyl_sum(int k, const WeightSequence& w,
                                   std::span<const double> x) {
    check_degree(k);
    if (static_cast<int>(x.size()) != k)
        throw std::invalid_argument("point dimension must equal k");
    Complex f = 0.0;
    for (std::uint32_t n = 1; n <= w.N; ++n) {
        double cycles = 0.0;
        double p = 1.0;
        for (int j = 0; j < k; ++j) {
            p *= n;
            cycles += p * x[j];
        }
        f += w.a[n - 1] * unit_phase(cycles);
    }
    return f;
}

double exact_moment(int k, int s, const WeightSequence& w, std::uint64_t grid_ops_budget,
                    unsigned threads) {
    return moment_engine(k, s, w, grid_ops_budget, kDefaultBudgetBytes, threads,
                         /*quadrature_only=*/true)
        .value;
}

double moment_identity(int k, int s, const WeightSequence& w,
                       std::uint64_t budget_bytes) {
    check_degree(k);
    if (s < 1) throw std::invalid_argument("moment order s must be >= 1");
    if (w.N < 1 || w.a.size() != w.N)
        throw std::invalid_argument("weight sequence must carry N entries");
    return identity_moment(k, s, w, budget_bytes);
}

double moment_auto(int k, int s, const WeightSequence& w, std::uint64_t grid_ops_budget,
                   std::uint64_t budget_bytes, unsigned threads) {
    return moment_engine(k, s, w, grid_ops_budget, budget_bytes, threads,
                         /*quadrature_only=*/false)
        .value;
}

RatioReport decoupling_ratio(int k, const WeightSequence& w,
                             std::uint64_t grid_ops_budget, std::uint64_t budget_bytes,
                             unsigned threads) {
    check_degree(k);
    const double mass = w.l2_norm_squared();
    if (mass == 0.0) throw std::invalid_argument("weights must not be all zero");
    const int s = k * (k + 1) / 2;  // p_k / 2
    const MomentResult m =
        moment_engine(k, s, w, grid_ops_budget, budget_bytes, threads, false);
    RatioReport report;
    report.grid = m.grid;
    report.value = std::pow(m.value, 1.0 / (k * (k + 1))) / std::sqrt(mass);
    report.converged = true;
    report.estimate_error = 0.0;
    return report;
}

GrowthResult growth_exponent(int k, std::span<const std::uint32_t> N_list,
                             WeightMode mode, std::uint64_t seed,
                             std::uint64_t grid_ops_budget, std::uint64_t budget_bytes,
                             unsigned threads) {
    check_degree(k);
    if (N_list.size() < 3)
        throw std::invalid_argument("growth fit needs at least 3 values of N");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (N_list[i] <= N_list[i - 1])
            throw std::invalid_argument("N_list must be strictly ascending");
    GrowthResult result;
    std::vector<double> log_N, log_D;
    for (std::uint32_t N : N_list) {
        const WeightSequence w =
            mode == WeightMode::kUnit
                ? WeightSequence::unit(N)
                : WeightSequence::random_unimodular(N, seed + N);
        const RatioReport r =
            decoupling_ratio(k, w, grid_ops_budget, budget_bytes, threads);
        result.N_values.push_back(N);
        result.D_values.push_back(r.value);
        log_N.push_back(std::log(static_cast<double>(N)));
        log_D.push_back(std::log(r.value));
    }
    result.slope = least_squares_slope(log_N, log_D);
    return result;
}

RatioReport bilinear_ratio(int k, std::uint32_t N, const DyadicInterval& I,
                           const DyadicInterval& I_prime, const WeightSequence& w,
                           double rel_tolerance, int max_doublings,
                           std::uint64_t grid_ops_budget, unsigned threads) {
    check_degree(k);
    if (I.level != 2 || I_prime.level != 2)
        throw std::invalid_argument("arcs must belong to the partition at scale 1/4");
    if (dyadic_distance(I, I_prime) < 0.25)
        throw std::invalid_argument("arcs must satisfy dist(I,I') >= 1/4");
    if (w.N != N || w.a.size() != N)
        throw std::invalid_argument("weight sequence must carry N entries");

    const WeightSequence wI = w.masked_to_arc(I);
    const WeightSequence wIp = w.masked_to_arc(I_prime);
    const double l2I = wI.l2_norm_squared();
    const double l2Ip = wIp.l2_norm_squared();

    RatioReport report;
    if (l2I == 0.0 || l2Ip == 0.0) {
        report.value = 0.0;
        report.converged = true;
        return report;
    }

    const int p = k * (k + 1);
    const double half_exp = p / 4.0;  // |f|^{p/2} = (|f|^2)^{p/4}
    const double denom = std::pow(l2I * l2Ip, half_exp);

    // Frequencies with nonzero weight, for the evaluation loops.
    std::vector<std::uint32_t> freqI, freqIp;
    for (std::uint32_t n = 1; n <= N; ++n) {
        if (wI.a[n - 1] != Complex(0.0, 0.0)) freqI.push_back(n);
        if (wIp.a[n - 1] != Complex(0.0, 0.0)) freqIp.push_back(n);
    }

    std::vector<u64> grid(k);
    {
        const u64 scale = 2 * static_cast<u64>(std::ceil(p / 4.0));
        u64 m = 1;
        for (int j = 0; j < k; ++j) {
            m *= N;
            grid[j] = scale * m + 1;
        }
    }

    const auto riemann = [&](const std::vector<u64>& g) -> double {
        u64 outer = 1;
        for (int j = 1; j < k; ++j) outer *= g[j];
        const std::size_t chunks = std::min<u64>(outer, 256);
        const double total = parallel_chunk_sum(
            chunks, threads, [&](std::size_t chunk) -> double {
                const u64 begin = outer * chunk / chunks;
                const u64 end = outer * (chunk + 1) / chunks;
                std::vector<u64> node(k, 0);
                std::vector<double> x(k, 0.0);
                double sum = 0.0, comp = 0.0;
                for (u64 lin = begin; lin < end; ++lin) {
                    u64 rem = lin;
                    for (int j = k - 1; j >= 1; --j) {
                        node[j] = rem % g[j];
                        rem /= g[j];
                    }
                    for (int j = 1; j < k; ++j)
                        x[j] = (static_cast<double>(node[j]) + 0.5) / g[j];
                    for (u64 t = 0; t < g[0]; ++t) {
                        x[0] = (static_cast<double>(t) + 0.5) / g[0];
                        Complex fI = 0.0, fIp = 0.0;
                        for (std::uint32_t n : freqI) {
                            double cycles = 0.0;
                            double pw = 1.0;
                            for (int j = 0; j < k; ++j) {
                                pw *= n;
                                cycles += pw * x[j];
                            }
                            fI += wI.a[n - 1] * unit_phase(cycles);
                        }
                        for (std::uint32_t n : freqIp) {
                            double cycles = 0.0;
                            double pw = 1.0;
                            for (int j = 0; j < k; ++j) {
                                pw *= n;
                                cycles += pw * x[j];
                            }
                            fIp += wIp.a[n - 1] * unit_phase(cycles);
                        }
                        const double v = std::pow(std::norm(fI), half_exp) *
                                         std::pow(std::norm(fIp), half_exp);
                        const double y = v - comp;
                        const double tt = sum + y;
                        comp = (tt - sum) - y;
                        sum = tt;
                    }
                }
                return sum;
            });
        double cell = 1.0;
        for (u64 m : g) cell /= static_cast<double>(m);
        return total * cell;
    };

    double previous = 0.0;
    bool have_previous = false;
    report.converged = false;
    for (int level = 0; level <= max_doublings; ++level) {
        u128 ops = freqI.size() + freqIp.size();
        for (u64 m : grid) ops *= m;
        if (ops > grid_ops_budget) break;
        const double integral = riemann(grid);
        const double value = integral / denom;
        report.grid.assign(grid.begin(), grid.end());
        if (have_previous) {
            const double change =
                std::fabs(value - previous) / std::max(std::fabs(value), 1e-300);
            report.estimate_error = change;
            if (change < rel_tolerance) {
                report.value = value;
                report.converged = true;
                return report;
            }
        }
        previous = value;
        have_previous = true;
        report.value = value;
        for (u64& m : grid) m *= 2;
    }
    return report;
}

} // namespace vinodec
