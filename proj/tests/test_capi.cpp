// Exercises the shared-library surface: status codes, opaque handles,
// string buffers. Uses only the public C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "vinodec.h"

TEST_CASE("status names and argument validation") {
    CHECK(std::string(vd_status_name(VD_OK)) == "ok");
    CHECK(std::string(vd_status_name(VD_ERR_RESOURCE)) == "resource");

    double out[3];
    CHECK(vd_moment_curve(0, 0.5, out) == VD_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(vd_last_error()) > 0);
    CHECK(vd_moment_curve(3, 0.5, nullptr) == VD_ERR_INVALID_ARGUMENT);
    CHECK(vd_moment_curve(3, 0.5, out) == VD_OK);
    CHECK(std::strlen(vd_last_error()) == 0);
    CHECK(out[0] == doctest::Approx(0.5));
    CHECK(out[2] == doctest::Approx(0.125));
}

TEST_CASE("geometry through the C surface") {
    double d[3];
    REQUIRE(vd_curve_derivative(3, 2, 0.0, d) == VD_OK);
    CHECK(d[1] == 2.0);

    vd_interval unit{0, 0};
    uint64_t count = 0;
    REQUIRE(vd_dyadic_partition_size(unit, 0.3, &count) == VD_OK);
    CHECK(count == 4);
    std::vector<vd_interval> parts(count);
    REQUIRE(vd_dyadic_partition(unit, 0.3, parts.data(), count, &count) == VD_OK);
    CHECK(parts[3].level == 2);
    CHECK(parts[3].index == 3);
    CHECK(vd_dyadic_partition(unit, 0.3, parts.data(), 2, &count) ==
          VD_ERR_BUFFER_TOO_SMALL);

    double value = 0.0;
    REQUIRE(vd_transversality_value(3, 1, 0.0, 1.0, &value) == VD_OK);
    CHECK(value == doctest::Approx(6.0));
    char constant[64];
    REQUIRE(vd_transversality_constant(3, 1, constant, sizeof(constant)) == VD_OK);
    CHECK(std::string(constant) == "6");
    CHECK(vd_transversality_constant(3, 1, constant, 1) == VD_ERR_BUFFER_TOO_SMALL);

    double residual = -1.0;
    REQUIRE(vd_verify_cap_rescaling({1, 1}, {2, 2}, 2, &residual) == VD_OK);
    CHECK(residual < 1e-10);
    CHECK(vd_verify_cap_rescaling({1, 1}, {2, 0}, 2, &residual) ==
          VD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("whitney families through the C surface") {
    uint64_t count = 0;
    REQUIRE(vd_whitney_size(VD_WHITNEY_COVER, 2, &count) == VD_OK);
    CHECK(count == 16);
    std::vector<vd_whitney_square> squares(count);
    REQUIRE(vd_whitney_squares(VD_WHITNEY_COVER, 2, squares.data(), count, &count) ==
            VD_OK);
    int diagonal = 0;
    for (const vd_whitney_square& sq : squares) diagonal += sq.diagonal;
    CHECK(diagonal == 10);

    char area[32];
    int32_t disjoint = 0;
    REQUIRE(vd_whitney_cover_stats(6, area, sizeof(area), &disjoint) == VD_OK);
    CHECK(std::string(area) == "1");
    CHECK(disjoint == 1);

    int32_t max_diag = 0;
    std::vector<int32_t> max_off(5, 0);
    REQUIRE(vd_whitney_multiplicity(6, &max_diag, max_off.data()) == VD_OK);
    CHECK(max_diag == 6);
    for (int32_t m : max_off) CHECK(m <= 8);

    CHECK(vd_whitney_size(VD_WHITNEY_OFFDIAGONAL, 1, &count) ==
          VD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("counting handles") {
    char j[64];
    uint64_t distinct = 0;
    double elapsed = 0.0;
    REQUIRE(vd_vinogradov_count(2, 3, 2, 0, 0, j, sizeof(j), &distinct, &elapsed) ==
            VD_OK);
    CHECK(std::string(j) == "20");
    CHECK(distinct == 4);

    REQUIRE(vd_brute_force_count(2, 3, 2, 0, j, sizeof(j)) == VD_OK);
    CHECK(std::string(j) == "20");
    CHECK(vd_brute_force_count(100, 4, 2, 1000, j, sizeof(j)) == VD_ERR_RESOURCE);

    vd_histogram* h = nullptr;
    REQUIRE(vd_histogram_build(2, 2, 2, 0, &h) == VD_OK);
    REQUIRE(h != nullptr);
    CHECK(vd_histogram_distinct(h) == 3);
    REQUIRE(vd_histogram_total_mass(h, j, sizeof(j)) == VD_OK);
    CHECK(std::string(j) == "4");
    const uint64_t v[2] = {3, 5};
    REQUIRE(vd_histogram_count_of(h, v, 2, j, sizeof(j)) == VD_OK);
    CHECK(std::string(j) == "2");
    REQUIRE(vd_histogram_sum_of_squares(h, j, sizeof(j)) == VD_OK);
    CHECK(std::string(j) == "6");
    vd_histogram_free(h);

    CHECK(vd_vinogradov_count(64, 3, 2, 1024, 0, j, sizeof(j), &distinct, &elapsed) ==
          VD_ERR_RESOURCE);
}

TEST_CASE("scan handle") {
    const uint32_t Ns[] = {2, 4, 8};
    vd_scan* scan = nullptr;
    REQUIRE(vd_mean_value_scan(Ns, 3, 3, 2, 0, 0, &scan) == VD_OK);
    REQUIRE(scan != nullptr);
    CHECK(vd_scan_rows(scan) == 3);
    CHECK(vd_scan_row_N(scan, 0) == 2);
    CHECK(vd_scan_row_ok(scan, 0) == 1);
    CHECK(std::string(vd_scan_row_J(scan, 0)) == "20");
    CHECK(vd_scan_row_rho(scan, 0) > 0.0);
    CHECK(vd_scan_slope_log_J(scan) > 0.0);
    vd_scan_free(scan);
}

TEST_CASE("weights and torus probes") {
    vd_weights* w = nullptr;
    REQUIRE(vd_weights_unit(2, &w) == VD_OK);

    double re = 0.0, im = 0.0;
    REQUIRE(vd_weights_get(w, 1, &re, &im) == VD_OK);
    CHECK(re == 1.0);
    CHECK(vd_weights_get(w, 3, &re, &im) == VD_ERR_INVALID_ARGUMENT);

    const double x[2] = {0.0, 0.0};
    REQUIRE(vd_eval_weyl_sum(2, w, x, &re, &im) == VD_OK);
    CHECK(re == doctest::Approx(2.0));

    double value = 0.0;
    REQUIRE(vd_moment(2, 3, w, VD_MOMENT_QUADRATURE, 0, 0, 0, &value) == VD_OK);
    CHECK(value == doctest::Approx(20.0));
    REQUIRE(vd_moment(2, 3, w, VD_MOMENT_IDENTITY, 0, 0, 0, &value) == VD_OK);
    CHECK(value == doctest::Approx(20.0));
    CHECK(vd_moment(3, 3, w, VD_MOMENT_QUADRATURE, 100, 0, 0, &value) ==
          VD_ERR_RESOURCE);

    vd_ratio_report report{};
    REQUIRE(vd_decoupling_ratio(2, w, 0, 0, 0, &report) == VD_OK);
    CHECK(report.value ==
          doctest::Approx(std::pow(20.0, 1.0 / 6.0) / std::sqrt(2.0)));
    CHECK(report.converged == 1);
    vd_weights_free(w);

    vd_weights* w8 = nullptr;
    REQUIRE(vd_weights_random(8, 123, &w8) == VD_OK);
    vd_ratio_report bilinear{};
    REQUIRE(vd_bilinear_ratio(2, 8, {2, 0}, {2, 2}, w8, 0, 0, 0, 0, &bilinear) ==
            VD_OK);
    CHECK(bilinear.converged == 1);
    CHECK(bilinear.value > 0.0);
    CHECK(vd_bilinear_ratio(2, 8, {2, 0}, {2, 1}, w8, 0, 0, 0, 0, &bilinear) ==
          VD_ERR_INVALID_ARGUMENT);
    vd_weights_free(w8);

    const uint32_t Ns[] = {4, 8, 16};
    double D[3] = {0, 0, 0};
    double slope = 0.0;
    REQUIRE(vd_growth_exponent(2, Ns, 3, VD_WEIGHTS_UNIT, 0, 0, 0, 0, D, &slope) ==
            VD_OK);
    CHECK(D[0] > 1.0);
    CHECK(slope > 0.0);
}

TEST_CASE("exponent system handles and fraction strings") {
    int64_t p = 0;
    REQUIRE(vd_critical_exponent(3, &p) == VD_OK);
    CHECK(p == 12);

    char buf[64];
    REQUIRE(vd_holder_theta(3, 1, buf, sizeof(buf)) == VD_OK);
    CHECK(std::string(buf) == "1/3");
    REQUIRE(vd_finiteness_slope(2, 1, buf, sizeof(buf)) == VD_OK);
    CHECK(std::string(buf) == "4/3");
    REQUIRE(vd_validity_range(4, 2, buf, sizeof(buf)) == VD_OK);
    CHECK(std::string(buf) == "1/4");
    REQUIRE(vd_a0_line(1, 2, buf, sizeof(buf)) == VD_OK);
    CHECK(std::string(buf) == "1/2");

    vd_system* sys = nullptr;
    REQUIRE(vd_system_build(4, &sys) == VD_OK);
    CHECK(vd_system_dim(sys) == 3);
    REQUIRE(vd_system_entry(sys, 1, 0, buf, sizeof(buf)) == VD_OK);
    CHECK(std::string(buf) == "2/3");
    REQUIRE(vd_system_source(sys, 0, buf, sizeof(buf)) == VD_OK);
    CHECK(std::string(buf) == "3/4");
    CHECK(vd_system_entry(sys, 5, 0, buf, sizeof(buf)) == VD_ERR_INVALID_ARGUMENT);
    vd_system_free(sys);

    int32_t left_ok = 0;
    REQUIRE(vd_verify_cancellation(4, &left_ok, buf, sizeof(buf)) == VD_OK);
    CHECK(left_ok == 1);
    CHECK(std::string(buf) == "3/4");
}
