// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "counting.hpp"
#include "exponents.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "torus.hpp"
#include "whitney.hpp"

using namespace vinodec;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, std::string title)
        : number_(number), title_(std::move(title)),
          start_(std::chrono::steady_clock::now()) {}

    void require(bool ok, const std::string& detail) {
        if (!ok && failure_.empty()) failure_ = detail;
    }

    ~Criterion() {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                .count();
        if (failure_.empty()) {
            std::printf("PASS - criterion %d: %s (%.1fs)\n", number_, title_.c_str(),
                        seconds);
        } else {
            std::printf("FAIL - criterion %d: %s (%.1fs) -- %s\n", number_,
                        title_.c_str(), seconds, failure_.c_str());
            ++g_failures;
        }
        std::fflush(stdout);
    }

private:
    int number_;
    std::string title_;
    std::string failure_;
    std::chrono::steady_clock::time_point start_;
};

DyadicInterval random_interval(SplitMix64& rng, int max_level) {
    const int level = static_cast<int>(rng.next_below(max_level + 1));
    const std::uint64_t index =
        level == 0 ? 0 : rng.next_below(std::uint64_t{1} << level);
    return DyadicInterval(level, index);
}

void criterion_1_oracle_equivalence() {
    Criterion c(1, "vinogradov_count equals brute force for k<=4, s<=4, N^(2s)<=1e6");
    for (std::uint32_t k = 1; k <= 4; ++k) {
        for (std::uint32_t s = 1; s <= 4; ++s) {
            for (std::uint32_t N = 1;; ++N) {
                if (std::pow(static_cast<double>(N), 2.0 * s) > 1e6) break;
                const BigInt engine = vinogradov_count(N, s, k).J;
                const BigInt oracle = brute_force_count(N, s, k, 1'100'000);
                if (engine != oracle) {
                    c.require(false, "mismatch at k=" + std::to_string(k) +
                                         " s=" + std::to_string(s) +
                                         " N=" + std::to_string(N) + ": " +
                                         engine.str() + " vs " + oracle.str());
                    return;
                }
            }
        }
    }
}

void criterion_2_known_values() {
    Criterion c(2, "J(N,1,k) = N and the exhaustive small counts");
    for (std::uint32_t N = 1; N <= 100; ++N)
        for (std::uint32_t k = 1; k <= 5; ++k)
            c.require(vinogradov_count(N, 1, k).J == N,
                      "J(N,1,k) != N at N=" + std::to_string(N) +
                          " k=" + std::to_string(k));
    c.require(vinogradov_count(2, 2, 2).J == 6, "J(2,2,2) != 6");
    c.require(vinogradov_count(2, 3, 2).J == 20, "J(2,3,2) != 20");
    c.require(brute_force_count(2, 2, 2) == 6, "enumeration J(2,2,2) != 6");
    c.require(brute_force_count(2, 3, 2) == 20, "enumeration J(2,3,2) != 20");
}

void criterion_3_counting_integral_bridge() {
    Criterion c(3, "exact_moment(k=2,s=3,unit) matches the exact count to 1e-9");
    for (std::uint32_t N : {2u, 4u, 8u}) {
        const double quad = exact_moment(2, 3, WeightSequence::unit(N));
        const double count = vinogradov_count(N, 3, 2).J.convert_to<double>();
        c.require(std::fabs(quad - count) <= 1e-9 * count,
                  "relative gap " + std::to_string(std::fabs(quad - count) / count) +
                      " at N=" + std::to_string(N));
    }
}

void criterion_4_growth_shadow() {
    Criterion c(4, "log D(N) slopes: k=2 below 0.12, k=3 below 0.25");
    const std::vector<std::uint32_t> N2 = {16, 32, 64, 128, 256, 512};
    const GrowthResult g2 = growth_exponent(2, N2, WeightMode::kUnit, 0);
    c.require(g2.slope < 0.12,
              "k=2 slope " + std::to_string(g2.slope) + " not below 0.12");
    std::vector<std::uint32_t> N3;
    for (std::uint32_t N = 4; N <= 24; ++N) N3.push_back(N);
    const GrowthResult g3 = growth_exponent(3, N3, WeightMode::kUnit, 0);
    c.require(g3.slope < 0.25,
              "k=3 slope " + std::to_string(g3.slope) + " not below 0.25");
}

void criterion_5_transversality_constants() {
    Criterion c(5, "transversality constants and the |xi1-xi2|^(l(k-l)) identity");
    SplitMix64 rng(505);
    for (int k = 2; k <= 8; ++k) {
        for (int l = 1; l <= k - 1; ++l) {
            const double constant =
                transversality_constant_exact(k, l).convert_to<double>();
            const double at01 = transversality_value(k, l, 0.0, 1.0);
            c.require(std::fabs(at01 - constant) <= 1e-9 * constant,
                      "constant mismatch at k=" + std::to_string(k) +
                          " l=" + std::to_string(l));
            for (int trial = 0; trial < 50; ++trial) {
                const double xi1 = rng.next_double();
                const double xi2 = rng.next_double();
                const double value = transversality_value(k, l, xi1, xi2);
                const double expect =
                    constant * std::pow(std::fabs(xi1 - xi2), l * (k - l));
                const double tol = 1e-9 * std::max(expect, 1e-300);
                c.require(std::fabs(value - expect) <= tol,
                          "identity fails at k=" + std::to_string(k) +
                              " l=" + std::to_string(l));
            }
        }
    }
}

void criterion_6_exponent_cancellation() {
    Criterion c(6, "left-eigenvector cancellation and collinearity for k in [2,50]");
    for (int k = 2; k <= 50; ++k) {
        const CancellationResult r = verify_cancellation(k);
        c.require(r.left_vector_ok, "1^T M != 1^T at k=" + std::to_string(k));
        c.require(r.eta_coefficient == Rational(k - 1, k),
                  "1^T c != (k-1)/k at k=" + std::to_string(k));
        for (int l = 1; l < k; ++l) {
            try {
                const Rational theta = holder_theta(k, l);  // verifies exactly
                c.require(theta == Rational(1, k - l + 1),
                          "theta wrong at k=" + std::to_string(k));
            } catch (const std::exception& e) {
                c.require(false, e.what());
            }
        }
    }
}

void criterion_7_whitney_suite() {
    Criterion c(7, "Whitney cover: exact area, disjointness, multiplicities, counts");
    c.require(whitney_offdiagonal(2).size() == 6, "|W_2| != 6");
    c.require(whitney_diagonal(2).size() == 10, "|~W_2| != 10");
    c.require(whitney_offdiagonal(3).size() == 18, "|W_3| != 18");
    for (int N = 2; N <= 12; ++N) {
        const auto cover = whitney_cover(N);
        c.require(cover_area(cover) == Rational(1),
                  "area != 1 at N=" + std::to_string(N));
        c.require(interiors_disjoint(cover),
                  "interior overlap at N=" + std::to_string(N));
        const MultiplicityReport report = multiplicity_report(N);
        c.require(report.max_diagonal <= 6,
                  "diagonal multiplicity > 6 at N=" + std::to_string(N));
        for (int bound : report.max_offdiagonal)
            c.require(bound <= 8,
                      "off-diagonal multiplicity > 8 at N=" + std::to_string(N));
    }
}

void criterion_8_rescaling() {
    Criterion c(8, "cap rescaling residual below 1e-10 on 100 random instances");
    SplitMix64 rng(808);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_below(5));
        const DyadicInterval I = random_interval(rng, 10);
        const int down =
            static_cast<int>(rng.next_below(std::min(20 - I.level, 10) + 1));
        const DyadicInterval J(
            I.level + down, (I.index << down) + rng.next_below(std::uint64_t{1} << down));
        const double residual = verify_cap_rescaling(I, J, k);
        c.require(residual < 1e-10,
                  "residual " + std::to_string(residual) + " at trial " +
                      std::to_string(trial));
    }
}

void criterion_9_bilinear_bridge() {
    Criterion c(9, "bilinear ratios converge under the Cauchy-Schwarz ceiling");
    const DyadicInterval I(2, 0), Ip(2, 2);
    const int k = 2, p = 6;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const WeightSequence w = WeightSequence::random_unimodular(8, seed);
        const RatioReport r = bilinear_ratio(k, 8, I, Ip, w);
        c.require(r.converged, "not converged at seed " + std::to_string(seed));
        const WeightSequence wI = w.masked_to_arc(I);
        const WeightSequence wIp = w.masked_to_arc(Ip);
        const double ceiling =
            std::sqrt(moment_auto(k, p / 2, wI) * moment_auto(k, p / 2, wIp)) /
            std::pow(wI.l2_norm_squared() * wIp.l2_norm_squared(), p / 4.0);
        c.require(r.value <= ceiling * (1.0 + r.estimate_error + 1e-9),
                  "ceiling violated at seed " + std::to_string(seed));
    }
}

void criterion_10_invariant_suite() {
    Criterion c(10, "Parseval, mass conservation, diagonal bound, monotonicity, modulation");
    SplitMix64 rng(1010);
    // Parseval across k <= 4, N <= 32
    for (int k = 1; k <= 4; ++k)
        for (std::uint32_t N : {2u, 5u, 16u, 32u}) {
            const WeightSequence w = WeightSequence::random_unimodular(N, rng.next());
            const double mass = w.l2_norm_squared();
            c.require(std::fabs(moment_auto(k, 1, w) - mass) <= 1e-12 * mass,
                      "Parseval fails at k=" + std::to_string(k) +
                          " N=" + std::to_string(N));
        }
    // mass conservation after every convolution step
    for (std::uint32_t N : {2u, 3u, 6u})
        for (std::uint32_t s = 1; s <= 4; ++s)
            for (std::uint32_t k = 1; k <= 3; ++k)
                c.require(build_histogram(N, s, k).total_mass() ==
                              boost::multiprecision::pow(BigInt(N), s),
                          "mass violated at N=" + std::to_string(N));
    // diagonal lower bound and monotonicity
    for (std::uint32_t N = 1; N <= 6; ++N)
        for (std::uint32_t s = 1; s <= 3; ++s)
            for (std::uint32_t k = 1; k <= 3; ++k) {
                const BigInt J = vinogradov_count(N, s, k).J;
                c.require(J >= boost::multiprecision::pow(BigInt(N), s),
                          "diagonal bound fails");
                c.require(vinogradov_count(N + 1, s, k).J >= J, "not monotone in N");
                c.require(vinogradov_count(N, s + 1, k).J >= J, "not monotone in s");
            }
    // modulation invariance
    for (int trial = 0; trial < 5; ++trial) {
        const std::uint32_t N = 6;
        WeightSequence w = WeightSequence::random_unimodular(N, rng.next());
        WeightSequence m = w;
        const double t1 = rng.next_double(), t2 = rng.next_double();
        for (std::uint32_t n = 1; n <= N; ++n) {
            const double arg = 2.0 * 3.14159265358979323846 *
                               (n * t1 + static_cast<double>(n) * n * t2);
            m.a[n - 1] *= std::complex<double>(std::cos(arg), std::sin(arg));
        }
        const double base = exact_moment(2, 3, w);
        const double shifted = exact_moment(2, 3, m);
        c.require(std::fabs(base - shifted) <= 1e-9 * base,
                  "modulation changes the moment");
        const double d1 = decoupling_ratio(2, w).value;
        const double d2 = decoupling_ratio(2, m).value;
        c.require(std::fabs(d1 - d2) <= 1e-9 * d1, "modulation changes the ratio");
    }
}

} // namespace

int main() {
    criterion_1_oracle_equivalence();
    criterion_2_known_values();
    criterion_3_counting_integral_bridge();
    criterion_4_growth_shadow();
    criterion_5_transversality_constants();
    criterion_6_exponent_cancellation();
    criterion_7_whitney_suite();
    criterion_8_rescaling();
    criterion_9_bilinear_bridge();
    criterion_10_invariant_suite();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria failed\n", g_failures);
    return g_failures;
}
