#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "osmodes/osmodes.h"

TEST_SUITE("capi") {
  TEST_CASE("profiles and error reporting") {
    osm_profile* p = nullptr;
    REQUIRE(osm_profile_create("poiseuille", &p) == OSM_OK);
    CHECK(std::strcmp(osm_profile_name(p), "poiseuille") == 0);
    osm_complex u[5];
    REQUIRE(osm_profile_eval(p, {1.0, 0.0}, u) == OSM_OK);
    CHECK(u[0].re == doctest::Approx(1.0));
    CHECK(std::abs(u[1].re) < 1e-15);
    osm_complex zc;
    double res = 1.0;
    REQUIRE(osm_critical_point(p, {0.19, 0.0}, {0.0, 0.0}, &zc, &res) == OSM_OK);
    CHECK(zc.re == doctest::Approx(0.1));
    osm_profile_destroy(p);

    osm_profile* bad = nullptr;
    CHECK(osm_profile_create("blasius", &bad) == OSM_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
    CHECK(std::strlen(osm_last_error()) > 0);
    CHECK(std::strcmp(osm_status_name(OSM_INVALID_ARGUMENT), "InvalidArgument") == 0);
    CHECK(std::strcmp(osm_status_name(OSM_CROSSING_NOT_FOUND), "CrossingNotFound") == 0);
  }

  TEST_CASE("Airy entry points") {
    osm_complex v;
    REQUIRE(osm_airy_eval(0, 0, {0.0, 0.0}, &v) == OSM_OK);
    CHECK(v.re == doctest::Approx(0.355028053887817239).epsilon(1e-14));
    CHECK(osm_airy_eval(0, 5, {0.0, 0.0}, &v) == OSM_UNSUPPORTED_ORDER);
    CHECK(osm_airy_eval(1, 0, {800.0, 0.0}, &v) == OSM_OVERFLOW);
    double lm;
    osm_complex ph;
    REQUIRE(osm_airy_log_eval(1, 0, {800.0, 0.0}, &lm, &ph) == OSM_OK);
    CHECK(lm > 700.0);
    REQUIRE(osm_c_ai_ratio({0.0, 0.0}, &v) == OSM_OK);
    CHECK(v.re == doctest::Approx(-0.776458211378).epsilon(1e-10));
  }

  TEST_CASE("context, modes and eigenvalue") {
    osm_profile* p = nullptr;
    REQUIRE(osm_profile_create("poiseuille", &p) == OSM_OK);
    osm_numerics num;
    osm_numerics_default(&num);
    osm_eigen_result r;
    REQUIRE(osm_solve_eigenvalue(p, 1.0, 1e4, nullptr, &num, &r) == OSM_OK);
    CHECK(std::abs(r.c.re - 0.23752649) < 1e-7);
    CHECK(std::abs(r.c.im - 0.00373967) < 1e-7);
    CHECK(r.growth_rate == doctest::Approx(r.c.im));

    osm_context* ctx = nullptr;
    REQUIRE(osm_context_create(p, 1.0, 1e4, r.c, &num, &ctx) == OSM_OK);
    size_t n = osm_context_size(ctx);
    CHECK(n > 0);
    CHECK(osm_context_node(ctx, 0).re == doctest::Approx(0.0));
    CHECK(osm_context_node(ctx, n - 1).re == doctest::Approx(1.0));
    osm_modes* m = nullptr;
    REQUIRE(osm_modes_build(ctx, &m) == OSM_OK);
    CHECK(osm_modes_size(m) == n);
    osm_complex det;
    double rel;
    REQUIRE(osm_modes_determinant(m, &det, &rel) == OSM_OK);
    CHECK(rel < 1e-6);
    for (int j = 1; j <= 4; ++j) {
      double res;
      REQUIRE(osm_modes_residual(m, j, &res) == OSM_OK);
      CHECK(res < 1e-5);
    }
    osm_complex v[2];
    REQUIRE(osm_modes_at(m, 1, 1.0, v) == OSM_OK);
    osm_complex d1;
    REQUIRE(osm_modes_value(m, 1, 1, n - 1, &d1) == OSM_OK);
    CHECK(std::hypot(v[1].re - d1.re, v[1].im - d1.im) < 1e-8);
    CHECK(osm_modes_value(m, 5, 0, 0, &d1) == OSM_INVALID_ARGUMENT);
    CHECK(osm_modes_at(m, 1, 1.5, v) == OSM_INVALID_ARGUMENT);
    double kappa;
    REQUIRE(osm_context_contraction(ctx, &kappa) == OSM_OK);
    CHECK(kappa < 0.5);
    std::vector<osm_complex> g(n);
    REQUIRE(osm_context_green_slice(ctx, osm_context_critical_point(ctx), 2, 0, g.data(), n) == OSM_OK);
    CHECK(osm_context_green_slice(ctx, osm_context_critical_point(ctx), 7, 0, g.data(), n) == OSM_INVALID_ARGUMENT);
    osm_modes_destroy(m);
    osm_context_destroy(ctx);

    osm_collocation_result col;
    REQUIRE(osm_collocation_nearest(p, 1.0, 1e4, r.c, 120, 40, &col) == OSM_OK);
    CHECK(col.found);
    CHECK(std::hypot(col.c.re - r.c.re, col.c.im - r.c.im) < 1e-7);
    CHECK(osm_solve_eigenvalue(p, -1.0, 1e4, nullptr, &num, &r) == OSM_INVALID_ARGUMENT);
    osm_profile_destroy(p);
  }

  TEST_CASE("growth rows and helpers") {
    osm_profile* p = nullptr;
    REQUIRE(osm_profile_create("poiseuille", &p) == OSM_OK);
    double betas[] = {0.125};
    double Rs[] = {1e5, 1e6};
    osm_growth_row rows[2];
    REQUIRE(osm_growth_rates(p, betas, 1, Rs, 2, 3.0, 2, nullptr, rows) == OSM_OK);
    CHECK(rows[0].R == 1e5);
    CHECK(rows[1].R == 1e6);
    for (auto& row : rows) {
      CHECK(row.converged);
      CHECK(row.growth_rate == row.alpha * row.c.im);
    }
    double x[] = {0.0, 1.0}, y[] = {2.0, 5.0}, s;
    REQUIRE(osm_fit_slope(x, y, 2, &s) == OSM_OK);
    CHECK(s == doctest::Approx(3.0));
    CHECK(osm_fit_slope(x, y, 1, &s) == OSM_INVALID_ARGUMENT);
    int hits[16] = {0};
    osm_parallel_for(16, 3, [](size_t i, void* u) { static_cast<int*>(u)[i] += 1; }, hits);
    for (int h : hits) CHECK(h == 1);
    osm_profile_destroy(p);
  }
}
