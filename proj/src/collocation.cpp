#include "osmodes/collocation.hpp"

#include <cmath>
#include <numbers>

#include <lapacke.h>

#include "osmodes/errors.hpp"

namespace osm {

void chebyshev_grid(int N, Eigen::VectorXd& z, Eigen::MatrixXd& D1) {
  const double pi = std::numbers::pi;
  Eigen::VectorXd x(N + 1), cw(N + 1);
  for (int j = 0; j <= N; ++j) {
    x(j) = std::cos(pi * j / N);
    cw(j) = ((j == 0 || j == N) ? 2.0 : 1.0) * (j % 2 ? -1.0 : 1.0);
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j)
      // x_i - x_j from the half-angle form avoids cancellation.
      if (i != j)
        D(i, j) = cw(i) / cw(j) / (-2.0 * std::sin(pi * (i + j) / (2.0 * N)) * std::sin(pi * (i - j) / (2.0 * N)));
  // Negative-sum trick for the diagonal.
  for (int i = 0; i <= N; ++i) D(i, i) = -D.row(i).sum();
  z = (x.array() + 1.0) / 2.0;
  D1 = 2.0 * D;
}

CollocationProblem assemble(const ShearProfile& p, double alpha, double R, int N) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "collocation needs alpha > 0");
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "collocation needs R > 0");
  if (N < 40 || N > 400) throw Error(ErrorCode::InvalidArgument, "N must lie in [40, 400]");
  CollocationProblem pr;
  pr.N = N;
  pr.alpha = alpha;
  pr.R = R;
  chebyshev_grid(N, pr.z, pr.D1);
  pr.D2 = pr.D1 * pr.D1;
  pr.D3 = pr.D2 * pr.D1;
  pr.D4 = pr.D2 * pr.D2;
  int n = N + 1;
  double a2 = alpha * alpha;
  cplx eps(0.0, -1.0 / (alpha * R));
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd L = pr.D2 - a2 * I;
  Eigen::VectorXd U(n), U2(n);
  for (int j = 0; j < n; ++j) {
    auto u = p.eval(pr.z(j));
    U(j) = u[0].real();
    U2(j) = u[2].real();
  }
  // Unknowns (phi, psi) with psi = L phi:
  //   eps L psi - U psi + U'' phi = -c psi,   psi - L phi = 0.
  pr.A = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  pr.B = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  pr.A.block(0, 0, n, n) = Eigen::MatrixXd(U2.asDiagonal()).cast<cplx>();
  pr.A.block(0, n, n, n) = eps * L.cast<cplx>() - Eigen::MatrixXd(U.asDiagonal()).cast<cplx>();
  pr.B.block(0, n, n, n) = -Eigen::MatrixXcd::Identity(n, n);
  pr.A.block(n, 0, n, n) = (-L).cast<cplx>();
  pr.A.block(n, n, n, n) = Eigen::MatrixXcd::Identity(n, n);
  // Bordering: psi'(1) = 0 (with phi'(1) = 0 this is phi'''(1) = 0), phi'(0) = 0,
  // phi'(1) = 0, phi(0) = 0. Node 0 is z = 1 and node N is z = 0.
  auto border = [&](int row, const Eigen::RowVectorXd& v, int col0) {
    pr.A.row(row).setZero();
    pr.B.row(row).setZero();
    pr.A.block(row, col0, 1, n) = v.cast<cplx>();
  };
  border(0, pr.D1.row(0), n);
  border(N, pr.D1.row(N), 0);
  border(n, pr.D1.row(0), 0);
  border(n + N, I.row(N), 0);
  Eigen::MatrixXcd inner = -L.block(1, 1, n - 2, n - 2).cast<cplx>();
  double rc = Eigen::PartialPivLU<Eigen::MatrixXcd>(inner).rcond();
  pr.cond_estimate = rc > 0.0 ? 1.0 / rc : INFINITY;
  if (pr.cond_estimate > 1e14) throw Error(ErrorCode::IllConditioned, "collocation pencil is ill conditioned");
  return pr;
}

Spectrum solve_spectrum(const CollocationProblem& prob, bool vectors) {
  int n = int(prob.A.rows());
  Eigen::MatrixXcd A = prob.A, B = prob.B;
  std::vector<lapack_complex_double> al(n), be(n);
  Eigen::MatrixXcd VR(n, vectors ? n : 1);
  lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n,
                                  reinterpret_cast<lapack_complex_double*>(A.data()), n,
                                  reinterpret_cast<lapack_complex_double*>(B.data()), n, al.data(), be.data(),
                                  nullptr, 1, reinterpret_cast<lapack_complex_double*>(VR.data()),
                                  vectors ? n : 1);
  if (info != 0) throw Error(ErrorCode::EigenSolveFailed, "generalized eigensolver failed");
  Spectrum s;
  for (int k = 0; k < n; ++k) {
    cplx a = reinterpret_cast<cplx*>(al.data())[k], b = reinterpret_cast<cplx*>(be.data())[k];
    if (std::abs(b) <= 1e-12 * std::abs(a)) continue;
    cplx c = a / b;
    // Physical eigenvalues lie near the range of U; the rest are bordering artifacts.
    if (!std::isfinite(std::abs(c)) || std::abs(c) > 1e3) continue;
    s.c.push_back(c);
    if (vectors) s.phi.push_back(VR.col(k).head(n / 2));
  }
  return s;
}

namespace {

std::vector<LeadingMode> confirmed_modes(const ShearProfile& p, double alpha, double R, int N, int dN) {
  Spectrum lo = solve_spectrum(assemble(p, alpha, R, N), true);
  Spectrum hi = solve_spectrum(assemble(p, alpha, R, N + dN), false);
  std::vector<LeadingMode> out;
  for (size_t k = 0; k < lo.c.size(); ++k) {
    double best = INFINITY;
    for (cplx h : hi.c) best = std::min(best, std::abs(h - lo.c[k]));
    if (best > 1e-4) continue;
    LeadingMode m;
    m.c = lo.c[k];
    m.pair_distance = best;
    m.self_converged = best <= 1e-6;
    m.phi = lo.phi[k];
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::optional<LeadingMode> leading_mode(const ShearProfile& p, double alpha, double R, int N, int dN,
                                        bool unstable_only) {
  auto modes = confirmed_modes(p, alpha, R, N, dN);
  std::optional<LeadingMode> best;
  for (auto& m : modes)
    if (!best || m.c.imag() > best->c.imag()) best = m;
  if (unstable_only && best && best->c.imag() < 0.0) return std::nullopt;
  return best;
}

std::optional<LeadingMode> leading_unstable(const ShearProfile& p, double alpha, double R, int N, int dN) {
  return leading_mode(p, alpha, R, N, dN, true);
}

std::optional<LeadingMode> nearest_mode(const ShearProfile& p, double alpha, double R, cplx target, int N,
                                        int dN) {
  auto modes = confirmed_modes(p, alpha, R, N, dN);
  std::optional<LeadingMode> best;
  for (auto& m : modes)
    if (!best || std::abs(m.c - target) < std::abs(best->c - target)) best = m;
  return best;
}

}  // namespace osm
