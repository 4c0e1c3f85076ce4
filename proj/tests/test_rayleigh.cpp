#include "doctest.h"
#include "oracles.hpp"
#include "osmodes/errors.hpp"
#include "osmodes/rayleigh.hpp"

using namespace osm;

namespace {

struct Setup {
  ShearProfile prof = make_poiseuille();
  cplx c;
  CriticalPoint cp;
  std::shared_ptr<const ContourMesh> mesh;
  std::unique_ptr<RayleighLayer> ray;
  explicit Setup(cplx c_) : c(c_), cp(find_critical_point(prof, c_, 0.0)) {
    mesh = std::make_shared<ContourMesh>(cp.z_c, 0.0);
    ray = std::make_unique<RayleighLayer>(prof, c, cp.z_c, mesh);
  }
};

// Smooth source a e^{kz} + b z^2 + d with derivatives to order 2.
MeshFunction random_source(const std::shared_ptr<const ContourMesh>& mesh, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cplx a(u(g), u(g)), b(u(g), u(g)), d(u(g), u(g));
  double k = 2.0 * u(g);
  MeshFunction f(mesh, 2);
  for (size_t i = 0; i < mesh->size(); ++i) {
    cplx z = mesh->node(i), e = a * std::exp(k * z);
    f.d[0][i] = e + b * z * z + d;
    f.d[1][i] = k * e + 2.0 * b * z;
    f.d[2][i] = k * k * e + 2.0 * b;
  }
  return f;
}

double sup_abs(const CVec& v) {
  double m = 0.0;
  for (auto x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("rayleigh") {
  TEST_CASE("phi_10 and phi_20 have unit Wronskian") {
    for (cplx c : {cplx(0.05, 0.02), cplx(0.1, 0.005), cplx(0.2, -0.01)}) {
      Setup s(c);
      const auto& a = s.ray->phi10().d;
      const auto& b = s.ray->phi20().d;
      double w = 0.0;
      for (size_t i = 0; i < s.mesh->size(); ++i) w = std::max(w, std::abs(a[0][i] * b[1][i] - a[1][i] * b[0][i] - 1.0));
      CHECK(w < 1e-8);
    }
  }

  TEST_CASE("phi_20 matches an independent ODE integration along the real axis") {
    Setup s(cplx(0.05, 0.02));
    auto& p = s.prof;
    cplx c = s.c;
    // (U - c) phi'' = U'' phi, integrated from z = 1 to z = 0 by classical RK4.
    auto rhs = [&](cplx z, cplx y0, cplx y1, cplx& d0, cplx& d1) {
      auto e = p.eval(z);
      d0 = y1;
      d1 = e[2] * y0 / (e[0] - c);
    };
    cplx y0 = s.ray->phi20_at(1.0), y1 = 1.0 / (p.value(1.0) - c);
    int n = 40000;
    double h = -1.0 / n;
    for (int k = 0; k < n; ++k) {
      cplx z = 1.0 + k * h, a0, a1, b0, b1, c0, c1, e0, e1;
      rhs(z, y0, y1, a0, a1);
      rhs(z + h / 2, y0 + h / 2 * a0, y1 + h / 2 * a1, b0, b1);
      rhs(z + h / 2, y0 + h / 2 * b0, y1 + h / 2 * b1, c0, c1);
      rhs(z + h, y0 + h * c0, y1 + h * c1, e0, e1);
      y0 += h / 6 * (a0 + 2.0 * b0 + 2.0 * c0 + e0);
      y1 += h / 6 * (a1 + 2.0 * b1 + 2.0 * c1 + e1);
    }
    CHECK(std::abs(s.ray->phi20_at(0.0) - y0) < 1e-8 * std::abs(y0));
    CHECK(std::abs(s.ray->phi20().d[0][0] - y0) < 1e-8 * std::abs(y0));
    CHECK(std::abs(s.ray->phi20().d[1][0] - y1) < 1e-8 * std::abs(y1));
  }

  TEST_CASE("RaySolver_alpha plug-back and Neumann trace at z = 1") {
    Setup s(cplx(0.08, 0.01));
    auto& g = oracle::rng();
    for (int t = 0; t < 10; ++t) {
      double alpha = 0.02 * (t + 1);
      auto f = random_source(s.mesh, g);
      auto phi = s.ray->solve_alpha(f, alpha, 1e-12);
      auto res = s.ray->apply(phi, alpha);
      double r = 0.0;
      for (size_t i = 0; i < res.size(); ++i) r = std::max(r, std::abs(res[i] - f.d[0][i]));
      CHECK(r / sup_abs(f.d[0]) < 1e-6);
      CHECK(std::abs(phi.d[1].back()) < 1e-8 * std::max(1.0, phi.sup(1)));
    }
  }

  TEST_CASE("solver is linear") {
    Setup s(cplx(0.1, 0.005));
    auto& g = oracle::rng();
    auto f1 = random_source(s.mesh, g), f2 = random_source(s.mesh, g);
    cplx a(0.7, -0.2), b(-1.3, 0.4);
    auto lhs = s.ray->solve_alpha(combine(scaled(f1, a), b, f2), 0.15);
    auto p1 = s.ray->solve_alpha(f1, 0.15), p2 = s.ray->solve_alpha(f2, 0.15);
    auto rhs = combine(scaled(p1, a), b, p2);
    double d = 0.0;
    for (size_t i = 0; i < lhs.size(); ++i) d = std::max(d, std::abs(lhs.d[0][i] - rhs.d[0][i]));
    CHECK(d < 1e-10 * rhs.sup(0));
  }

  TEST_CASE("phi_1,alpha near the wall") {
    Setup s(cplx(0.02, 0.005));
    double alpha = 0.1;
    auto phi = s.ray->phi_j_alpha(1, alpha, 1e-12);
    auto res = s.ray->apply(phi, alpha);
    CHECK(sup_abs(res) < 1e-6 * phi.sup(0));
    CHECK(std::abs(phi.d[1].back()) < 1e-10);
    // phi(0) - (U0 - c) ~ (alpha^2 / U0') int (U - c)^2; the integral is 8/15 at c = 0.
    auto integrand = [&](cplx z) { return std::pow(s.prof.value(z) - s.c, 2); };
    cplx I = oracle::segment_integral(integrand, 0.0, 1.0);
    CHECK(std::abs(oracle::segment_integral([&](cplx z) { return std::pow(s.prof.value(z), 2); }, 0.0, 1.0) -
                   8.0 / 15.0) < 1e-12);
    cplx lead = alpha * alpha * I / 2.0;
    cplx dev = phi.d[0][0] - (0.0 - s.c);
    CHECK(std::abs(dev - lead) < 0.2 * std::abs(lead));
    CHECK(std::abs(phi.d[1][0] - 2.0) <= 0.05 * 2.0);
    CHECK_THROWS_AS(s.ray->phi_j_alpha(3, alpha), Error);
  }

  TEST_CASE("norms") {
    Setup s(cplx(0.1, 0.01));
    MeshFunction one(s.mesh, 2);
    for (auto& v : one.d[0]) v = 1.0;
    auto rep = norm_report(one, s.cp.z_c, 2);
    for (int k = 0; k < 3; ++k) CHECK(rep.x[k] == doctest::Approx(1.0));
    // (z - z_c) log(z - z_c) has finite X_2 and Y_2.
    MeshFunction f(s.mesh, 2);
    for (size_t i = 0; i < s.mesh->size(); ++i) {
      cplx d = s.mesh->node(i) - s.cp.z_c, l = std::log(d);
      f.d[0][i] = d * l;
      f.d[1][i] = l + 1.0;
      f.d[2][i] = 1.0 / d;
    }
    auto r2 = norm_report(f, s.cp.z_c, 2);
    CHECK(std::isfinite(r2.x[2]));
    CHECK(r2.x[2] < 20.0);
    CHECK(r2.y[2] < 20.0);
  }
}
