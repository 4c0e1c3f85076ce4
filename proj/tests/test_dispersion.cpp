#include "doctest.h"
#include "osmodes/collocation.hpp"
#include "osmodes/dispersion.hpp"
#include "osmodes/errors.hpp"

using namespace osm;

namespace {

const cplx kOrszag(0.23752649, 0.00373967);

}  // namespace

TEST_SUITE("dispersion") {
  TEST_CASE("classical eigenvalue at alpha = 1, R = 1e4") {
    auto p = make_poiseuille();
    auto r = solve_eigenvalue(p, 1.0, 1e4);
    CHECK(std::abs(r.c - kOrszag) < 1e-7);
    CHECK(r.growth_rate == doctest::Approx(r.c.imag()));
    CHECK(r.residual <= 1e-8);
    CHECK(dispersion_det_relative(r.modes) <= 1e-6);
    auto col = nearest_mode(p, 1.0, 1e4, r.c);
    REQUIRE(col.has_value());
    CHECK(std::abs(col->c - r.c) <= 1e-2);
    CHECK(std::abs(col->c - r.c) <= 1e-7);
  }

  TEST_CASE("determinant is linear in each column") {
    auto p = make_poiseuille();
    OrrContext ctx(p, 1.0, 1e4, cplx(0.24, 0.004));
    auto m = build_modes(ctx);
    cplx d0 = dispersion_det(m);
    for (int j = 0; j < 3; ++j) {
      auto s = m;
      cplx f(1.7, -0.4);
      for (int k = 0; k < 4; ++k) {
        s.at0[j][k] *= f;
        s.at1[j][k] *= f;
      }
      CHECK(std::abs(dispersion_det(s) - f * d0) < 1e-12 * std::abs(f * d0));
    }
    // The phi_4 column is normalized by phi_4'''(1), so its scale drops out.
    auto s = m;
    for (int k = 0; k < 4; ++k) {
      s.at0[3][k] *= 3.0;
      s.at1[3][k] *= 3.0;
    }
    CHECK(std::abs(dispersion_det(s) - d0) < 1e-12 * std::abs(d0));
  }

  TEST_CASE("reduced relation near the determinant root") {
    auto p = make_poiseuille();
    auto full = solve_eigenvalue(p, 1.0, 1e4);
    // K3 = K1 holds at the root up to the small-alpha and delta error terms.
    cplx red = reduced_dispersion(full.modes, p.wall_slope());
    CHECK(std::abs(red) < 1e-6 * (std::abs(full.modes.K1) + std::abs(full.modes.K3)));
    DispersionOptions opt;
    opt.reduced = true;
    auto r = solve_eigenvalue(p, 1.0, 1e4, full.c, opt);
    CHECK(std::abs(r.c - full.c) <= 1e-3);
    CHECK(r.residual <= 1e-8);
  }

  TEST_CASE("reduced and full roots agree on the lower branch at R = 1e5") {
    auto p = make_poiseuille();
    double alpha = 2.5 * std::pow(1e5, -1.0 / 7.0);
    auto full = solve_eigenvalue(p, alpha, 1e5);
    DispersionOptions opt;
    opt.reduced = true;
    auto red = solve_eigenvalue(p, alpha, 1e5, full.c, opt);
    CHECK(std::abs(red.c - full.c) <= 1e-3);
  }

  TEST_CASE("model seed and inviscid limit") {
    auto p = make_poiseuille();
    for (double alpha : {0.05, 0.1, 0.2}) {
      // K1 = 0 with the small-alpha Rayleigh K1 gives c = U0 + O(alpha^2).
      cplx c0 = cplx(0.01, 0.01), c1 = cplx(0.02, 0.01);
      auto k1 = [&](cplx c) {
        auto cp = find_critical_point(p, c, 0.0);
        auto mesh = std::make_shared<ContourMesh>(cp.z_c, 0.0);
        RayleighLayer ray(p, c, cp.z_c, mesh);
        auto phi = ray.phi_j_alpha(1, alpha, 1e-12);
        return phi.d[0][0] / phi.d[1][0];
      };
      cplx f0 = k1(c0), f1 = k1(c1);
      for (int it = 0; it < 30 && std::abs(c1 - c0) > 1e-12; ++it) {
        cplx c2 = c1 - f1 * (c1 - c0) / (f1 - f0);
        c0 = c1;
        f0 = f1;
        c1 = c2;
        f1 = k1(c1);
      }
      CHECK(std::abs(f1) < 1e-10);
      CHECK(std::abs(c1 - p.wall_value()) <= 1.0 * alpha * alpha);
    }
    cplx s = default_seed(p, 1.0, 1e4);
    CHECK(std::abs(s - kOrszag) < 0.05);
  }

  TEST_CASE("Couette has no unstable root") {
    auto p = make_couette();
    for (double alpha : {0.5, 1.0})
      for (double R : {1e3, 1e4}) {
        try {
          auto r = solve_eigenvalue(p, alpha, R);
          CHECK(r.c.imag() < 0.0);
        } catch (const Error& e) {
          CHECK((e.code() == ErrorCode::NoConvergence || e.code() == ErrorCode::LeftHalfPlaneExit ||
                 e.code() == ErrorCode::ModeConstructionFailed));
        }
      }
  }

  TEST_CASE("wandering seeds are rejected") {
    auto p = make_poiseuille();
    DispersionOptions opt;
    opt.max_wander = 0.01;
    CHECK_THROWS_AS(solve_eigenvalue(p, 1.0, 1e4, cplx(0.2, 0.0), opt), Error);
    CHECK_THROWS_AS(solve_eigenvalue(p, 0.0, 1e4), Error);
  }

  TEST_CASE("branch scan brackets and bisects a crossing") {
    auto p = make_poiseuille();
    auto scan = scan_lower_branch(p, 1e6, {2.0, 2.5, 3.0}, 1e-3);
    CHECK(scan.status == "ok");
    REQUIRE(scan.crossings.size() == 1);
    double a = scan.crossings[0];
    CHECK(a > 2.0);
    CHECK(a < 3.0);
    CHECK(std::abs(scan.crossing_c[0].imag()) < 1e-4);
    for (const auto& pt : scan.points) CHECK(pt.converged);
  }

  TEST_CASE("growth table and slope fit") {
    auto p = make_poiseuille();
    auto serial = scan_growth_rates(p, {0.125}, {1e5, 1e6}, 3.0, 1);
    auto par = scan_growth_rates(p, {0.125}, {1e5, 1e6}, 3.0, 2);
    REQUIRE(serial.size() == 2);
    for (size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].R == par[i].R);
      CHECK(serial[i].c == par[i].c);
      CHECK(serial[i].growth_rate == serial[i].alpha * serial[i].c.imag());
    }
    CHECK(fit_slope({0.0, 1.0, 2.0}, {1.0, -1.0, -3.0}) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(fit_slope({1.0}, {1.0}), Error);
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
}
