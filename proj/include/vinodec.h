/* vinodec: computable moment-curve decoupling objects.
 *
 * Exact Vinogradov mean values, torus decoupling ratios, moment-curve cap
 * geometry, Whitney decomposition combinatorics, and the exponent bootstrap
 * system in exact rational arithmetic, behind a plain C interface.
 *
 * Conventions:
 *   - Every fallible call returns vd_status; outputs go through pointers.
 *   - On failure, vd_last_error() carries a message (thread-local).
 *   - Exact integers and rationals cross the boundary as decimal or "p/q"
 *     strings written into caller buffers; VD_ERR_BUFFER_TOO_SMALL is
 *     returned when a buffer cannot hold the result.
 *   - Opaque handles (vd_weights, vd_histogram, vd_scan, vd_system) own
 *     their storage and are released with the matching _free call.
 */

#ifndef VINODEC_H
#define VINODEC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vd_status {
    VD_OK = 0,
    VD_ERR_INVALID_ARGUMENT = 1,
    VD_ERR_RESOURCE = 2,        /* memory/work budget exceeded */
    VD_ERR_NOT_CONVERGED = 3,
    VD_ERR_BUFFER_TOO_SMALL = 4,
    VD_ERR_INTERNAL = 5
} vd_status;

const char* vd_status_name(vd_status status);
const char* vd_last_error(void);

/* Dyadic interval [index * 2^-level, (index+1) * 2^-level] of [0,1]. */
typedef struct vd_interval {
    int32_t level;
    uint64_t index;
} vd_interval;

/* ------------------------------------------------------------------ */
/* Moment-curve geometry (degree k <= 8 on all floating-point paths).  */

vd_status vd_moment_curve(int32_t k, double xi, double* out /* k */);
vd_status vd_curve_derivative(int32_t k, int32_t order, double xi, double* out /* k */);

/* Number of intervals in the partition of I at scale delta, and the
 * partition itself (levels/indices arrays of capacity `capacity`). */
vd_status vd_dyadic_partition_size(vd_interval I, double delta, uint64_t* count);
vd_status vd_dyadic_partition(vd_interval I, double delta, vd_interval* out,
                              uint64_t capacity, uint64_t* count);

/* Cap around Gamma(c_J): center (k), axis rows (k*k, row-major), half-widths (k). */
vd_status vd_cap(vd_interval J, int32_t k, double* center, double* axes,
                 double* half_widths);
vd_status vd_cap_volume(vd_interval J, int32_t k, double* volume);

vd_status vd_polar_box_gauge(vd_interval I, int32_t k, const double* x, double* gauge);
vd_status vd_polar_box_volume(vd_interval I, int32_t k, double* volume);
vd_status vd_bump(vd_interval I, int32_t k, const double* x, double* value);

/* Affine rescaling A_I: linear part (k*k, row-major) and translation (k). */
vd_status vd_affine_map(vd_interval I, int32_t k, double* linear, double* translation);
vd_status vd_verify_cap_rescaling(vd_interval I, vd_interval J, int32_t k,
                                  double* residual);

/* Wedge volume of m vectors of dimension k (rows of `vectors`). */
vd_status vd_wedge_volume(int32_t m, int32_t k, const double* vectors, double* volume);

vd_status vd_transversality_value(int32_t k, int32_t l, double xi1, double xi2,
                                  double* value);
/* Exact integer binom(k,l) (prod_{i<=l} i!) (prod_{j<=k-l} j!) as decimal text. */
vd_status vd_transversality_constant(int32_t k, int32_t l, char* buf, size_t buf_len);

vd_status vd_projected_torsion(int32_t k, int32_t l, double xi_prime,
                               const double* grid, uint64_t grid_len, double* minimum);

/* ------------------------------------------------------------------ */
/* Whitney decomposition of [0,1]^2 around the diagonal.               */

typedef struct vd_whitney_square {
    int32_t scale;
    uint64_t i;
    uint64_t j;
    int32_t diagonal; /* 1 when the square belongs to the diagonal family */
} vd_whitney_square;

typedef enum vd_whitney_family {
    VD_WHITNEY_OFFDIAGONAL = 0, /* W_n */
    VD_WHITNEY_DIAGONAL = 1,    /* ~W_N */
    VD_WHITNEY_COVER = 2        /* W^N */
} vd_whitney_family;

vd_status vd_whitney_size(vd_whitney_family family, int32_t n, uint64_t* count);
vd_status vd_whitney_squares(vd_whitney_family family, int32_t n,
                             vd_whitney_square* out, uint64_t capacity,
                             uint64_t* count);

/* Exact cover checks: area as a "p/q" string plus interior disjointness. */
vd_status vd_whitney_cover_stats(int32_t N, char* area_buf, size_t area_buf_len,
                                 int32_t* interiors_disjoint);

/* max_offdiagonal must have room for N-1 entries (levels 2..N). */
vd_status vd_whitney_multiplicity(int32_t N, int32_t* max_diagonal,
                                  int32_t* max_offdiagonal);

/* ------------------------------------------------------------------ */
/* Exact Vinogradov mean values.                                       */

#define VD_DEFAULT_BUDGET_BYTES (UINT64_C(1) << 30)
#define VD_DEFAULT_BRUTE_BUDGET UINT64_C(10000000)
#define VD_DEFAULT_GRID_OPS UINT64_C(200000000)

/* J_{s,k}(N) as a decimal string; threads = 0 picks a default. */
vd_status vd_vinogradov_count(uint32_t N, uint32_t s, uint32_t k,
                              uint64_t budget_bytes, uint32_t threads, char* j_buf,
                              size_t j_buf_len, uint64_t* distinct_vectors,
                              double* elapsed_ms);

/* Independent oracle: enumerates all 2s-tuples (budget = max tuples). */
vd_status vd_brute_force_count(uint32_t N, uint32_t s, uint32_t k,
                               uint64_t budget_tuples, char* j_buf, size_t j_buf_len);

typedef struct vd_histogram vd_histogram;

vd_status vd_histogram_build(uint32_t N, uint32_t s, uint32_t k,
                             uint64_t budget_bytes, vd_histogram** out);
void vd_histogram_free(vd_histogram* h);
uint64_t vd_histogram_distinct(const vd_histogram* h);
vd_status vd_histogram_total_mass(const vd_histogram* h, char* buf, size_t buf_len);
/* r(v) for the k-vector v, "0" when absent. */
vd_status vd_histogram_count_of(const vd_histogram* h, const uint64_t* v, uint32_t k,
                                char* buf, size_t buf_len);
vd_status vd_histogram_sum_of_squares(const vd_histogram* h, char* buf, size_t buf_len);

typedef struct vd_scan vd_scan;

/* rho = J / (N^s + N^max(0, 2s - k(k+1)/2)); failed cells are recorded. */
vd_status vd_mean_value_scan(const uint32_t* N_list, uint64_t n, uint32_t s,
                             uint32_t k, uint64_t budget_bytes, uint32_t threads,
                             vd_scan** out);
void vd_scan_free(vd_scan* scan);
uint64_t vd_scan_rows(const vd_scan* scan);
uint32_t vd_scan_row_N(const vd_scan* scan, uint64_t row);
int32_t vd_scan_row_ok(const vd_scan* scan, uint64_t row);
const char* vd_scan_row_error(const vd_scan* scan, uint64_t row);
const char* vd_scan_row_J(const vd_scan* scan, uint64_t row); /* decimal string */
double vd_scan_row_rho(const vd_scan* scan, uint64_t row);
uint64_t vd_scan_row_distinct(const vd_scan* scan, uint64_t row);
double vd_scan_row_elapsed_ms(const vd_scan* scan, uint64_t row);
double vd_scan_slope_log_J(const vd_scan* scan);
double vd_scan_slope_log_rho(const vd_scan* scan);

/* ------------------------------------------------------------------ */
/* Torus probes (periodic single-frequency-per-arc model).             */

typedef struct vd_weights vd_weights;

vd_status vd_weights_unit(uint32_t N, vd_weights** out);
vd_status vd_weights_random(uint32_t N, uint64_t seed, vd_weights** out);
vd_status vd_weights_from_arrays(uint32_t N, const double* re, const double* im,
                                 vd_weights** out);
void vd_weights_free(vd_weights* w);
uint32_t vd_weights_N(const vd_weights* w);
vd_status vd_weights_get(const vd_weights* w, uint32_t n, double* re, double* im);

vd_status vd_eval_weyl_sum(int32_t k, const vd_weights* w, const double* x /* k */,
                           double* re, double* im);

typedef enum vd_moment_path {
    VD_MOMENT_AUTO = 0,
    VD_MOMENT_QUADRATURE = 1, /* errors with VD_ERR_RESOURCE when over budget */
    VD_MOMENT_IDENTITY = 2
} vd_moment_path;

vd_status vd_moment(int32_t k, int32_t s, const vd_weights* w, vd_moment_path path,
                    uint64_t grid_ops_budget, uint64_t budget_bytes, uint32_t threads,
                    double* value);

typedef struct vd_ratio_report {
    double value;
    uint64_t grid[8]; /* per-dimension point counts; zeros on exact paths */
    int32_t grid_dims;
    int32_t converged;
    double estimate_error;
} vd_ratio_report;

vd_status vd_decoupling_ratio(int32_t k, const vd_weights* w, uint64_t grid_ops_budget,
                              uint64_t budget_bytes, uint32_t threads,
                              vd_ratio_report* report);

typedef enum vd_weight_mode { VD_WEIGHTS_UNIT = 0, VD_WEIGHTS_RANDOM = 1 } vd_weight_mode;

/* D values per N plus the least-squares slope of log D against log N. */
vd_status vd_growth_exponent(int32_t k, const uint32_t* N_list, uint64_t n,
                             vd_weight_mode mode, uint64_t seed,
                             uint64_t grid_ops_budget, uint64_t budget_bytes,
                             uint32_t threads, double* D_values, double* slope);

vd_status vd_bilinear_ratio(int32_t k, uint32_t N, vd_interval I, vd_interval I_prime,
                            const vd_weights* w, double rel_tolerance,
                            int32_t max_doublings, uint64_t grid_ops_budget,
                            uint32_t threads, vd_ratio_report* report);

/* ------------------------------------------------------------------ */
/* Exponent bootstrap system, exact rationals as "p/q" strings.        */

vd_status vd_critical_exponent(int32_t k, int64_t* p_k);
vd_status vd_holder_theta(int32_t k, int32_t l, char* buf, size_t buf_len);
vd_status vd_finiteness_slope(int32_t k, int32_t l, char* buf, size_t buf_len);
vd_status vd_validity_range(int32_t k, int32_t l, char* buf, size_t buf_len);
/* A_0(b) = eta (1 - b) for b = b_num/b_den; writes the eta coefficient. */
vd_status vd_a0_line(int64_t b_num, int64_t b_den, char* buf, size_t buf_len);

typedef struct vd_system vd_system;

vd_status vd_system_build(int32_t k, vd_system** out);
void vd_system_free(vd_system* sys);
int32_t vd_system_dim(const vd_system* sys); /* k - 1 */
vd_status vd_system_entry(const vd_system* sys, int32_t row, int32_t col, char* buf,
                          size_t buf_len);
vd_status vd_system_source(const vd_system* sys, int32_t row, char* buf,
                           size_t buf_len);
/* left_vector_ok = (1,...,1) M = (1,...,1); eta coefficient = 1^T c = (k-1)/k. */
vd_status vd_verify_cancellation(int32_t k, int32_t* left_vector_ok, char* eta_buf,
                                 size_t eta_buf_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VINODEC_H */
