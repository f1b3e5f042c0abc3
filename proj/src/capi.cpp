#include "vinodec.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "counting.hpp"
#include "exponents.hpp"
#include "geometry.hpp"
#include "torus.hpp"
#include "whitney.hpp"

using namespace vinodec;

namespace {

thread_local std::string g_last_error;

vd_status fail(vd_status code, const char* message) {
    g_last_error = message;
    return code;
}

// Runs fn, mapping the library's exception idiom onto status codes.
template <class Fn>
vd_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const std::invalid_argument& e) {
        return fail(VD_ERR_INVALID_ARGUMENT, e.what());
    } catch (const ResourceError& e) {
        return fail(VD_ERR_RESOURCE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(VD_ERR_RESOURCE, "allocation failed");
    } catch (const std::exception& e) {
        return fail(VD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(VD_ERR_INTERNAL, "unknown error");
    }
}

vd_status write_string(const std::string& text, char* buf, size_t buf_len) {
    if (buf == nullptr || buf_len < text.size() + 1)
        return fail(VD_ERR_BUFFER_TOO_SMALL, "output buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return VD_OK;
}

DyadicInterval to_interval(vd_interval I) { return DyadicInterval(I.level, I.index); }

vd_status check_out(const void* p) {
    if (p == nullptr) return fail(VD_ERR_INVALID_ARGUMENT, "null output pointer");
    return VD_OK;
}

void fill_report(const RatioReport& in, vd_ratio_report* out) {
    out->value = in.value;
    out->grid_dims = static_cast<int32_t>(in.grid.size());
    for (int i = 0; i < 8; ++i)
        out->grid[i] = i < out->grid_dims ? in.grid[i] : 0;
    out->converged = in.converged ? 1 : 0;
    out->estimate_error = in.estimate_error;
}

} // namespace

extern "C" {

struct vd_histogram {
    PowerSumHistogram impl;
};

struct vd_scan {
    ScanResult impl;
    std::vector<std::string> j_strings;
};

struct vd_weights {
    WeightSequence impl;
};

struct vd_system {
    ExponentSystem impl;
};

const char* vd_status_name(vd_status status) {
    switch (status) {
        case VD_OK: return "ok";
        case VD_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case VD_ERR_RESOURCE: return "resource";
        case VD_ERR_NOT_CONVERGED: return "not_converged";
        case VD_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
        case VD_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* vd_last_error(void) { return g_last_error.c_str(); }

/* ---------------- geometry ---------------- */

vd_status vd_moment_curve(int32_t k, double xi, double* out) {
    return guarded([&] {
        if (vd_status s = check_out(out)) return s;
        const Vec v = moment_curve(k, xi);
        std::memcpy(out, v.data(), sizeof(double) * v.size());
        return VD_OK;
    });
}

vd_status vd_curve_derivative(int32_t k, int32_t order, double xi, double* out) {
    return guarded([&] {
        if (vd_status s = check_out(out)) return s;
        const Vec v = curve_derivative(k, order, xi);
        std::memcpy(out, v.data(), sizeof(double) * v.size());
        return VD_OK;
    });
}

vd_status vd_dyadic_partition_size(vd_interval I, double delta, uint64_t* count) {
    return guarded([&] {
        if (vd_status s = check_out(count)) return s;
        const DyadicInterval parent = to_interval(I);
        if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
        if (delta > parent.length()) throw std::invalid_argument("delta exceeds |I|");
        const int n = partition_level(delta);
        *count = std::uint64_t{1} << (n - parent.level);
        return VD_OK;
    });
}

vd_status vd_dyadic_partition(vd_interval I, double delta, vd_interval* out,
                              uint64_t capacity, uint64_t* count) {
    return guarded([&] {
        if (vd_status s = check_out(out)) return s;
        if (vd_status s = check_out(count)) return s;
        const auto parts = dyadic_partition(to_interval(I), delta);
        *count = parts.size();
        if (capacity < parts.size())
            return fail(VD_ERR_BUFFER_TOO_SMALL, "partition capacity too small");
        for (std::size_t i = 0; i < parts.size(); ++i)
            out[i] = {parts[i].level, parts[i].index};
        return VD_OK;
    });
}

vd_status vd_cap(vd_interval J, int32_t k, double* center, double* axes,
                 double* half_widths) {
    return guarded([&] {
        if (vd_status s = check_out(center)) return s;
        if (vd_status s = check_out(axes)) return s;
        if (vd_status s = check_out(half_widths)) return s;
        const Parallelepiped box = cap(to_interval(J), k);
        std::memcpy(center, box.center.data(), sizeof(double) * k);
        std::memcpy(axes, box.axes.a.data(), sizeof(double) * k * k);
        std::memcpy(half_widths, box.half_widths.data(), sizeof(double) * k);
        return VD_OK;
    });
}

vd_status vd_cap_volume(vd_interval J, int32_t k, double* volume) {
    return guarded([&] {
        if (vd_status s = check_out(volume)) return s;
        *volume = cap(to_interval(J), k).volume();
        return VD_OK;
    });
}

vd_status vd_polar_box_gauge(vd_interval I, int32_t k, const double* x, double* gauge) {
    return guarded([&] {
        if (vd_status s = check_out(x)) return s;
        if (vd_status s = check_out(gauge)) return s;
        *gauge = polar_box_gauge(to_interval(I), k, {x, static_cast<size_t>(k)});
        return VD_OK;
    });
}

vd_status vd_polar_box_volume(vd_interval I, int32_t k, double* volume) {
    return guarded([&] {
        if (vd_status s = check_out(volume)) return s;
        *volume = polar_box_volume(to_interval(I), k);
        return VD_OK;
    });
}

vd_status vd_bump(vd_interval I, int32_t k, const double* x, double* value) {
    return guarded([&] {
        if (vd_status s = check_out(x)) return s;
        if (vd_status s = check_out(value)) return s;
        *value = bump(to_interval(I), k, {x, static_cast<size_t>(k)});
        return VD_OK;
    });
}

vd_status vd_affine_map(vd_interval I, int32_t k, double* linear, double* translation) {
    return guarded([&] {
        if (vd_status s = check_out(linear)) return s;
        if (vd_status s = check_out(translation)) return s;
        const AffineMap m = affine_map(to_interval(I), k);
        std::memcpy(linear, m.linear.a.data(), sizeof(double) * k * k);
        std::memcpy(translation, m.translation.data(), sizeof(double) * k);
        return VD_OK;
    });
}

vd_status vd_verify_cap_rescaling(vd_interval I, vd_interval J, int32_t k,
                                  double* residual) {
    return guarded([&] {
        if (vd_status s = check_out(residual)) return s;
        *residual = verify_cap_rescaling(to_interval(I), to_interval(J), k);
        return VD_OK;
    });
}

vd_status vd_wedge_volume(int32_t m, int32_t k, const double* vectors, double* volume) {
    return guarded([&] {
        if (vd_status s = check_out(vectors)) return s;
        if (vd_status s = check_out(volume)) return s;
        if (m < 1 || k < 1) throw std::invalid_argument("m and k must be >= 1");
        std::vector<Vec> rows(m, Vec(k));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < k; ++j) rows[i][j] = vectors[i * k + j];
        *volume = wedge_volume(rows);
        return VD_OK;
    });
}

vd_status vd_transversality_value(int32_t k, int32_t l, double xi1, double xi2,
                                  double* value) {
    return guarded([&] {
        if (vd_status s = check_out(value)) return s;
        *value = transversality_value(k, l, xi1, xi2);
        return VD_OK;
    });
}

vd_status vd_transversality_constant(int32_t k, int32_t l, char* buf, size_t buf_len) {
    return guarded([&] {
        return write_string(transversality_constant_exact(k, l).str(), buf, buf_len);
    });
}

vd_status vd_projected_torsion(int32_t k, int32_t l, double xi_prime,
                               const double* grid, uint64_t grid_len, double* minimum) {
    return guarded([&] {
        if (vd_status s = check_out(grid)) return s;
        if (vd_status s = check_out(minimum)) return s;
        *minimum = projected_torsion(k, l, xi_prime, {grid, grid_len});
        return VD_OK;
    });
}

/* ---------------- whitney ---------------- */

namespace {

std::vector<WhitneySquare> whitney_family(vd_whitney_family family, int32_t n) {
    switch (family) {
        case VD_WHITNEY_OFFDIAGONAL: return whitney_offdiagonal(n);
        case VD_WHITNEY_DIAGONAL: return whitney_diagonal(n);
        case VD_WHITNEY_COVER: return whitney_cover(n);
    }
    throw std::invalid_argument("unknown Whitney family");
}

} // namespace

vd_status vd_whitney_size(vd_whitney_family family, int32_t n, uint64_t* count) {
    return guarded([&] {
        if (vd_status s = check_out(count)) return s;
        *count = whitney_family(family, n).size();
        return VD_OK;
    });
}

vd_status vd_whitney_squares(vd_whitney_family family, int32_t n,
                             vd_whitney_square* out, uint64_t capacity,
                             uint64_t* count) {
    return guarded([&] {
        if (vd_status s = check_out(out)) return s;
        if (vd_status s = check_out(count)) return s;
        const auto squares = whitney_family(family, n);
        *count = squares.size();
        if (capacity < squares.size())
            return fail(VD_ERR_BUFFER_TOO_SMALL, "square capacity too small");
        for (std::size_t i = 0; i < squares.size(); ++i)
            out[i] = {squares[i].scale(), squares[i].first.index,
                      squares[i].second.index, squares[i].diagonal_class ? 1 : 0};
        return VD_OK;
    });
}

vd_status vd_whitney_cover_stats(int32_t N, char* area_buf, size_t area_buf_len,
                                 int32_t* interiors_disjoint_out) {
    return guarded([&] {
        if (vd_status s = check_out(interiors_disjoint_out)) return s;
        const auto cover = whitney_cover(N);
        const Rational area = cover_area(cover);
        *interiors_disjoint_out = interiors_disjoint(cover) ? 1 : 0;
        return write_string(area.str(), area_buf, area_buf_len);
    });
}

vd_status vd_whitney_multiplicity(int32_t N, int32_t* max_diagonal,
                                  int32_t* max_offdiagonal) {
    return guarded([&] {
        if (vd_status s = check_out(max_diagonal)) return s;
        if (vd_status s = check_out(max_offdiagonal)) return s;
        const MultiplicityReport report = multiplicity_report(N);
        *max_diagonal = report.max_diagonal;
        for (std::size_t i = 0; i < report.max_offdiagonal.size(); ++i)
            max_offdiagonal[i] = report.max_offdiagonal[i];
        return VD_OK;
    });
}

/* ---------------- counting ---------------- */

vd_status vd_vinogradov_count(uint32_t N, uint32_t s, uint32_t k,
                              uint64_t budget_bytes, uint32_t threads, char* j_buf,
                              size_t j_buf_len, uint64_t* distinct_vectors,
                              double* elapsed_ms) {
    return guarded([&] {
        const CountResult r = vinogradov_count(
            N, s, k, budget_bytes ? budget_bytes : VD_DEFAULT_BUDGET_BYTES, threads);
        if (distinct_vectors) *distinct_vectors = r.distinct_vectors;
        if (elapsed_ms) *elapsed_ms = r.elapsed_ms;
        return write_string(r.J.str(), j_buf, j_buf_len);
    });
}

vd_status vd_brute_force_count(uint32_t N, uint32_t s, uint32_t k,
                               uint64_t budget_tuples, char* j_buf, size_t j_buf_len) {
    return guarded([&] {
        const BigInt r = brute_force_count(
            N, s, k, budget_tuples ? budget_tuples : VD_DEFAULT_BRUTE_BUDGET);
        return write_string(r.str(), j_buf, j_buf_len);
    });
}

vd_status vd_histogram_build(uint32_t N, uint32_t s, uint32_t k,
                             uint64_t budget_bytes, vd_histogram** out) {
    return guarded([&] {
        if (vd_status st = check_out(out)) return st;
        *out = new vd_histogram{build_histogram(
            N, s, k, budget_bytes ? budget_bytes : VD_DEFAULT_BUDGET_BYTES)};
        return VD_OK;
    });
}

void vd_histogram_free(vd_histogram* h) { delete h; }

uint64_t vd_histogram_distinct(const vd_histogram* h) {
    return h ? h->impl.distinct() : 0;
}

vd_status vd_histogram_total_mass(const vd_histogram* h, char* buf, size_t buf_len) {
    return guarded([&] {
        if (vd_status st = check_out(h)) return st;
        return write_string(h->impl.total_mass().str(), buf, buf_len);
    });
}

vd_status vd_histogram_count_of(const vd_histogram* h, const uint64_t* v, uint32_t k,
                                char* buf, size_t buf_len) {
    return guarded([&] {
        if (vd_status st = check_out(h)) return st;
        if (vd_status st = check_out(v)) return st;
        if (k != h->impl.k()) throw std::invalid_argument("vector dimension mismatch");
        return write_string(h->impl.count_of({v, k}).str(), buf, buf_len);
    });
}

vd_status vd_histogram_sum_of_squares(const vd_histogram* h, char* buf,
                                      size_t buf_len) {
    return guarded([&] {
        if (vd_status st = check_out(h)) return st;
        return write_string(h->impl.sum_of_squares().str(), buf, buf_len);
    });
}

vd_status vd_mean_value_scan(const uint32_t* N_list, uint64_t n, uint32_t s, uint32_t k,
                             uint64_t budget_bytes, uint32_t threads, vd_scan** out) {
    return guarded([&] {
        if (vd_status st = check_out(N_list)) return st;
        if (vd_status st = check_out(out)) return st;
        auto scan = std::make_unique<vd_scan>();
        scan->impl = mean_value_scan(
            {N_list, n}, s, k, budget_bytes ? budget_bytes : VD_DEFAULT_BUDGET_BYTES,
            threads);
        for (const ScanRow& row : scan->impl.rows)
            scan->j_strings.push_back(row.ok ? row.J.str() : std::string());
        *out = scan.release();
        return VD_OK;
    });
}

void vd_scan_free(vd_scan* scan) { delete scan; }
uint64_t vd_scan_rows(const vd_scan* scan) { return scan ? scan->impl.rows.size() : 0; }
uint32_t vd_scan_row_N(const vd_scan* scan, uint64_t row) {
    return scan->impl.rows[row].N;
}
int32_t vd_scan_row_ok(const vd_scan* scan, uint64_t row) {
    return scan->impl.rows[row].ok ? 1 : 0;
}
const char* vd_scan_row_error(const vd_scan* scan, uint64_t row) {
    return scan->impl.rows[row].error_class.c_str();
}
const char* vd_scan_row_J(const vd_scan* scan, uint64_t row) {
    return scan->j_strings[row].c_str();
}
double vd_scan_row_rho(const vd_scan* scan, uint64_t row) {
    return scan->impl.rows[row].rho;
}
uint64_t vd_scan_row_distinct(const vd_scan* scan, uint64_t row) {
    return scan->impl.rows[row].distinct_vectors;
}
double vd_scan_row_elapsed_ms(const vd_scan* scan, uint64_t row) {
    return scan->impl.rows[row].elapsed_ms;
}
double vd_scan_slope_log_J(const vd_scan* scan) { return scan->impl.slope_log_J; }
double vd_scan_slope_log_rho(const vd_scan* scan) { return scan->impl.slope_log_rho; }

/* ---------------- torus ---------------- */

vd_status vd_weights_unit(uint32_t N, vd_weights** out) {
    return guarded([&] {
        if (vd_status st = check_out(out)) return st;
        *out = new vd_weights{WeightSequence::unit(N)};
        return VD_OK;
    });
}

vd_status vd_weights_random(uint32_t N, uint64_t seed, vd_weights** out) {
    return guarded([&] {
        if (vd_status st = check_out(out)) return st;
        *out = new vd_weights{WeightSequence::random_unimodular(N, seed)};
        return VD_OK;
    });
}

vd_status vd_weights_from_arrays(uint32_t N, const double* re, const double* im,
                                 vd_weights** out) {
    return guarded([&] {
        if (vd_status st = check_out(re)) return st;
        if (vd_status st = check_out(im)) return st;
        if (vd_status st = check_out(out)) return st;
        if (N < 1) throw std::invalid_argument("N must be >= 1");
        WeightSequence w;
        w.N = N;
        w.a.reserve(N);
        for (uint32_t i = 0; i < N; ++i) w.a.emplace_back(re[i], im[i]);
        *out = new vd_weights{std::move(w)};
        return VD_OK;
    });
}

void vd_weights_free(vd_weights* w) { delete w; }
uint32_t vd_weights_N(const vd_weights* w) { return w ? w->impl.N : 0; }

vd_status vd_weights_get(const vd_weights* w, uint32_t n, double* re, double* im) {
    return guarded([&] {
        if (vd_status st = check_out(w)) return st;
        if (vd_status st = check_out(re)) return st;
        if (vd_status st = check_out(im)) return st;
        if (n < 1 || n > w->impl.N)
            throw std::invalid_argument("frequency n must be in [1,N]");
        *re = w->impl.a[n - 1].real();
        *im = w->impl.a[n - 1].imag();
        return VD_OK;
    });
}

vd_status vd_eval_weyl_sum(int32_t k, const vd_weights* w, const double* x, double* re,
                           double* im) {
    return guarded([&] {
        if (vd_status st = check_out(w)) return st;
        if (vd_status st = check_out(x)) return st;
        if (vd_status st = check_out(re)) return st;
        if (vd_status st = check_out(im)) return st;
        const std::complex<double> f =
            eval_weyl_sum(k, w->impl, {x, static_cast<size_t>(k)});
        *re = f.real();
        *im = f.imag();
        return VD_OK;
    });
}

vd_status vd_moment(int32_t k, int32_t s, const vd_weights* w, vd_moment_path path,
                    uint64_t grid_ops_budget, uint64_t budget_bytes, uint32_t threads,
                    double* value) {
    return guarded([&] {
        if (vd_status st = check_out(w)) return st;
        if (vd_status st = check_out(value)) return st;
        const uint64_t grid = grid_ops_budget ? grid_ops_budget : VD_DEFAULT_GRID_OPS;
        const uint64_t bytes = budget_bytes ? budget_bytes : VD_DEFAULT_BUDGET_BYTES;
        switch (path) {
            case VD_MOMENT_AUTO:
                *value = moment_auto(k, s, w->impl, grid, bytes, threads);
                return VD_OK;
            case VD_MOMENT_QUADRATURE:
                *value = exact_moment(k, s, w->impl, grid, threads);
                return VD_OK;
            case VD_MOMENT_IDENTITY:
                *value = moment_identity(k, s, w->impl, bytes);
                return VD_OK;
        }
        throw std::invalid_argument("unknown moment path");
    });
}

vd_status vd_decoupling_ratio(int32_t k, const vd_weights* w, uint64_t grid_ops_budget,
                              uint64_t budget_bytes, uint32_t threads,
                              vd_ratio_report* report) {
    return guarded([&] {
        if (vd_status st = check_out(w)) return st;
        if (vd_status st = check_out(report)) return st;
        const RatioReport r = decoupling_ratio(
            k, w->impl, grid_ops_budget ? grid_ops_budget : VD_DEFAULT_GRID_OPS,
            budget_bytes ? budget_bytes : VD_DEFAULT_BUDGET_BYTES, threads);
        fill_report(r, report);
        return VD_OK;
    });
}

vd_status vd_growth_exponent(int32_t k, const uint32_t* N_list, uint64_t n,
                             vd_weight_mode mode, uint64_t seed,
                             uint64_t grid_ops_budget, uint64_t budget_bytes,
                             uint32_t threads, double* D_values, double* slope) {
    return guarded([&] {
        if (vd_status st = check_out(N_list)) return st;
        if (vd_status st = check_out(D_values)) return st;
        if (vd_status st = check_out(slope)) return st;
        const GrowthResult r = growth_exponent(
            k, {N_list, n},
            mode == VD_WEIGHTS_UNIT ? WeightMode::kUnit : WeightMode::kRandom, seed,
            grid_ops_budget ? grid_ops_budget : VD_DEFAULT_GRID_OPS,
            budget_bytes ? budget_bytes : VD_DEFAULT_BUDGET_BYTES, threads);
        for (std::size_t i = 0; i < r.D_values.size(); ++i) D_values[i] = r.D_values[i];
        *slope = r.slope;
        return VD_OK;
    });
}

vd_status vd_bilinear_ratio(int32_t k, uint32_t N, vd_interval I, vd_interval I_prime,
                            const vd_weights* w, double rel_tolerance,
                            int32_t max_doublings, uint64_t grid_ops_budget,
                            uint32_t threads, vd_ratio_report* report) {
    return guarded([&] {
        if (vd_status st = check_out(w)) return st;
        if (vd_status st = check_out(report)) return st;
        const RatioReport r = bilinear_ratio(
            k, N, to_interval(I), to_interval(I_prime), w->impl,
            rel_tolerance > 0 ? rel_tolerance : 1e-3,
            max_doublings > 0 ? max_doublings : 8,
            grid_ops_budget ? grid_ops_budget : VD_DEFAULT_GRID_OPS, threads);
        fill_report(r, report);
        return r.converged ? VD_OK
                           : fail(VD_ERR_NOT_CONVERGED,
                                  "grid doubling did not reach the tolerance");
    });
}

/* ---------------- exponents ---------------- */

vd_status vd_critical_exponent(int32_t k, int64_t* p_k) {
    return guarded([&] {
        if (vd_status st = check_out(p_k)) return st;
        *p_k = critical_exponent(k);
        return VD_OK;
    });
}

vd_status vd_holder_theta(int32_t k, int32_t l, char* buf, size_t buf_len) {
    return guarded(
        [&] { return write_string(holder_theta(k, l).str(), buf, buf_len); });
}

vd_status vd_finiteness_slope(int32_t k, int32_t l, char* buf, size_t buf_len) {
    return guarded(
        [&] { return write_string(finiteness_slope(k, l).str(), buf, buf_len); });
}

vd_status vd_validity_range(int32_t k, int32_t l, char* buf, size_t buf_len) {
    return guarded(
        [&] { return write_string(validity_range(k, l).str(), buf, buf_len); });
}

vd_status vd_a0_line(int64_t b_num, int64_t b_den, char* buf, size_t buf_len) {
    return guarded([&] {
        if (b_den == 0) throw std::invalid_argument("b denominator must be nonzero");
        const auto [constant, coeff] = a0_line(Rational(b_num, b_den));
        (void)constant;  // always 0
        return write_string(coeff.str(), buf, buf_len);
    });
}

vd_status vd_system_build(int32_t k, vd_system** out) {
    return guarded([&] {
        if (vd_status st = check_out(out)) return st;
        *out = new vd_system{build_system(k)};
        return VD_OK;
    });
}

void vd_system_free(vd_system* sys) { delete sys; }

int32_t vd_system_dim(const vd_system* sys) {
    return sys ? static_cast<int32_t>(sys->impl.M.size()) : 0;
}

vd_status vd_system_entry(const vd_system* sys, int32_t row, int32_t col, char* buf,
                          size_t buf_len) {
    return guarded([&] {
        if (vd_status st = check_out(sys)) return st;
        const int dim = static_cast<int>(sys->impl.M.size());
        if (row < 0 || row >= dim || col < 0 || col >= dim)
            throw std::invalid_argument("matrix index out of range");
        return write_string(sys->impl.M[row][col].str(), buf, buf_len);
    });
}

vd_status vd_system_source(const vd_system* sys, int32_t row, char* buf,
                           size_t buf_len) {
    return guarded([&] {
        if (vd_status st = check_out(sys)) return st;
        const int dim = static_cast<int>(sys->impl.c.size());
        if (row < 0 || row >= dim)
            throw std::invalid_argument("source index out of range");
        return write_string(sys->impl.c[row].str(), buf, buf_len);
    });
}

vd_status vd_verify_cancellation(int32_t k, int32_t* left_vector_ok, char* eta_buf,
                                 size_t eta_buf_len) {
    return guarded([&] {
        if (vd_status st = check_out(left_vector_ok)) return st;
        const CancellationResult r = verify_cancellation(k);
        *left_vector_ok = r.left_vector_ok ? 1 : 0;
        return write_string(r.eta_coefficient.str(), eta_buf, eta_buf_len);
    });
}

} /* extern "C" */
