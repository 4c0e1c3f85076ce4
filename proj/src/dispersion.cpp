#include "osmodes/dispersion.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Dense>

#include "osmodes/airy.hpp"
#include "osmodes/errors.hpp"

namespace osm {

namespace {

Eigen::Matrix4cd boundary_matrix(const OrrModeSet& m) {
  Eigen::Matrix4cd W;
  for (int j = 0; j < 4; ++j) {
    W(0, j) = m.at0[j][0];
    W(1, j) = m.at0[j][1];
    W(2, j) = m.at1[j][1];
    W(3, j) = m.at1[j][3];
  }
  cplx s = m.at1[3][3];
  if (!(std::abs(s) > 0.0)) throw Error(ErrorCode::DegenerateDenominator, "phi_4'''(1) vanishes");
  W.col(3) /= s;
  return W;
}

}  // namespace

cplx dispersion_det(const OrrModeSet& modes) { return boundary_matrix(modes).determinant(); }

double dispersion_det_relative(const OrrModeSet& modes) {
  Eigen::Matrix4cd W = boundary_matrix(modes);
  double prod = 1.0;
  for (int j = 0; j < 4; ++j) prod *= W.col(j).norm();
  return std::abs(W.determinant()) / prod;
}

cplx reduced_dispersion(const OrrModeSet& m, double wall_slope) {
  return m.K3 - m.K1 + m.K2 / (wall_slope * wall_slope);
}

namespace {

OrrModeSet modes_at(const ShearProfile& p, double alpha, double R, cplx c, const NumericsOptions& opt) {
  try {
    OrrContext ctx(p, alpha, R, c, opt);
    return build_modes(ctx);
  } catch (const Error& e) {
    throw Error(ErrorCode::ModeConstructionFailed, std::string("mode construction failed: ") + e.what());
  }
}

}  // namespace

cplx dispersion_det(const ShearProfile& p, double alpha, double R, cplx c, const NumericsOptions& opt) {
  return dispersion_det(modes_at(p, alpha, R, c, opt));
}

cplx reduced_dispersion(const ShearProfile& p, double alpha, double R, cplx c, const NumericsOptions& opt) {
  return reduced_dispersion(modes_at(p, alpha, R, c, opt), p.wall_slope());
}

cplx rayleigh_seed(const ShearProfile& p, double alpha, double R) {
  double eps = 1.0 / (alpha * R);
  double d = std::cbrt(eps / p.wall_slope());
  return cplx(p.wall_value(), 0.5 * d);
}

cplx model_dispersion(const ShearProfile& p, double alpha, double R, cplx c) {
  double u0 = p.wall_value(), s0 = p.wall_slope();
  CriticalPoint cp = find_critical_point(p, c, (c - u0) / s0);
  cplx eps(0.0, -1.0 / (alpha * R));
  cplx delta = std::pow(eps / p.eval(cp.z_c)[1], 1.0 / 3.0);
  std::vector<double> x, w;
  gauss_legendre(24, x, w);
  cplx integral = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    cplx d = p.eval(0.5 * (x[i] + 1.0))[0] - c;
    integral += 0.5 * w[i] * d * d;
  }
  cplx k1 = (u0 - c + alpha * alpha * integral / s0) / s0;
  cplx k3 = delta * c_ai_ratio(-cp.z_c / delta);
  return k3 - k1;
}

cplx default_seed(const ShearProfile& p, double alpha, double R) {
  cplx c0 = rayleigh_seed(p, alpha, R);
  try {
    cplx c1 = c0 + cplx(0.0, 0.05 * c0.imag());
    cplx f0 = model_dispersion(p, alpha, R, c0), f1 = model_dispersion(p, alpha, R, c1);
    for (int it = 0; it < 60; ++it) {
      cplx step = -f1 * (c1 - c0) / (f1 - f0);
      if (std::abs(step) > 0.05) step *= 0.05 / std::abs(step);
      c0 = c1;
      f0 = f1;
      c1 += step;
      if (std::abs(c1 - p.wall_value()) > 0.3) break;
      f1 = model_dispersion(p, alpha, R, c1);
      if (std::abs(step) < 1e-10) return c1;
    }
  } catch (const Error&) {
  }
  return rayleigh_seed(p, alpha, R);
}

DispersionResult solve_eigenvalue(const ShearProfile& p, double alpha, double R, std::optional<cplx> c_init,
                                  const DispersionOptions& opt) {
  if (!(alpha > 0.0) || !(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha and R must be positive");
  DispersionResult res;
  res.alpha = alpha;
  res.R = R;
  double u0 = p.wall_value(), s0 = p.wall_slope();
  struct Eval {
    cplx f;
    double rel;
    OrrModeSet modes;
  };
  auto eval = [&](cplx c) {
    Eval e;
    e.modes = modes_at(p, alpha, R, c, opt.numerics);
    if (opt.reduced) {
      e.f = reduced_dispersion(e.modes, s0);
      e.rel = std::abs(e.f) / (std::abs(e.modes.K1) + std::abs(e.modes.K3));
    } else {
      e.f = dispersion_det(e.modes);
      e.rel = dispersion_det_relative(e.modes);
    }
    return e;
  };
  cplx seed = c_init.value_or(default_seed(p, alpha, R));
  double dscale = std::cbrt(1.0 / (alpha * R * s0));
  cplx c0 = seed;
  Eval e0 = eval(c0);
  cplx c1 = c0 + cplx(0.0, 0.05 * dscale);
  Eval e1 = eval(c1);
  res.history = {c0, c1};
  const double max_step = std::max(0.05, 2.0 * dscale);
  for (int it = 1; it <= opt.max_iter; ++it) {
    cplx df = e1.f - e0.f;
    if (df == 0.0) throw Error(ErrorCode::NoConvergence, "secant slope vanished");
    cplx step = -e1.f * (c1 - c0) / df;
    if (std::abs(step) > max_step) step *= max_step / std::abs(step);
    cplx c2 = c1 + step;
    Eval e2;
    bool ok = false;
    for (int damp = 0; damp < 6 && !ok; ++damp) {
      if (std::abs(c2 - u0) > opt.max_wander)
        throw Error(ErrorCode::LeftHalfPlaneExit, "eigenvalue iterate left the neighborhood of U(0)");
      try {
        e2 = eval(c2);
        ok = true;
      } catch (const Error&) {
        step *= 0.5;
        c2 = c1 + step;
      }
    }
    if (!ok) throw Error(ErrorCode::ModeConstructionFailed, "modes could not be built along the secant path");
    res.history.push_back(c2);
    c0 = c1;
    e0 = std::move(e1);
    c1 = c2;
    e1 = std::move(e2);
    res.iterations = it;
    if (std::abs(c1 - c0) <= opt.tol_dc && e1.rel <= opt.tol_residual) {
      res.c = c1;
      res.im_c = c1.imag();
      res.growth_rate = alpha * c1.imag();
      res.residual = e1.rel;
      res.modes = std::move(e1.modes);
      return res;
    }
  }
  throw Error(ErrorCode::NoConvergence, "eigenvalue iteration did not converge");
}

BranchScan scan_branch(const ShearProfile& p, double R, double beta, const std::vector<double>& A_values,
                       double rel_tol, const DispersionOptions& opt) {
  BranchScan scan;
  scan.R = R;
  scan.beta = beta;
  double scale = std::pow(R, -beta);
  std::optional<cplx> prev;
  for (double A : A_values) {
    BranchPoint pt;
    pt.A = A;
    pt.alpha = A * scale;
    auto attempt = [&](std::optional<cplx> seed) {
      DispersionResult r = solve_eigenvalue(p, pt.alpha, R, seed, opt);
      pt.c = r.c;
      pt.residual = r.residual;
      pt.converged = true;
    };
    try {
      attempt(prev);
    } catch (const Error& e) {
      pt.error = e.what();
      if (prev) {
        try {
          attempt(std::nullopt);
          pt.error.clear();
        } catch (const Error& e2) {
          pt.error = e2.what();
        }
      }
    }
    if (pt.converged) prev = pt.c;
    scan.points.push_back(pt);
  }
  // Bisect every sign change between consecutive converged samples.
  const BranchPoint* last = nullptr;
  for (const auto& pt : scan.points) {
    if (!pt.converged) continue;
    if (last && (last->c.imag() < 0.0) != (pt.c.imag() < 0.0)) {
      double lo = last->A, hi = pt.A;
      cplx clo = last->c, chi = pt.c;
      bool lo_neg = clo.imag() < 0.0;
      try {
        while ((hi - lo) > rel_tol * 0.5 * (hi + lo)) {
          double mid = 0.5 * (lo + hi);
          DispersionResult r = solve_eigenvalue(p, mid * scale, R, 0.5 * (clo + chi), opt);
          if ((r.c.imag() < 0.0) == lo_neg) {
            lo = mid;
            clo = r.c;
          } else {
            hi = mid;
            chi = r.c;
          }
        }
        scan.crossings.push_back(0.5 * (lo + hi));
        scan.crossing_c.push_back(0.5 * (clo + chi));
      } catch (const Error& e) {
        scan.status = std::string("bisection failed: ") + e.what();
      }
    }
    last = &pt;
  }
  if (scan.status.empty()) scan.status = scan.crossings.empty() ? "no crossing in range" : "ok";
  return scan;
}

BranchScan scan_lower_branch(const ShearProfile& p, double R, const std::vector<double>& A_values,
                             double rel_tol, const DispersionOptions& opt) {
  return scan_branch(p, R, 1.0 / 7.0, A_values, rel_tol, opt);
}

BranchScan scan_upper_branch(const ShearProfile& p, double R, const std::vector<double>& A_values,
                             double rel_tol, const DispersionOptions& opt) {
  return scan_branch(p, R, 1.0 / 11.0, A_values, rel_tol, opt);
}

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  size_t nt = std::min<size_t>(std::max(1, workers), n);
  if (nt <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<GrowthRow> scan_growth_rates(const ShearProfile& p, const std::vector<double>& betas,
                                         const std::vector<double>& Rs, double A, int workers,
                                         const DispersionOptions& opt) {
  std::vector<GrowthRow> rows;
  for (double b : betas)
    for (double R : Rs) {
      GrowthRow r;
      r.beta = b;
      r.R = R;
      r.alpha = A * std::pow(R, -b);
      rows.push_back(r);
    }
  parallel_for(rows.size(), workers, [&](size_t i) {
    GrowthRow& r = rows[i];
    try {
      DispersionResult d = solve_eigenvalue(p, r.alpha, r.R, std::nullopt, opt);
      r.c = d.c;
      r.growth_rate = r.alpha * d.c.imag();
      r.converged = true;
    } catch (const Error& e) {
      r.error = e.what();
    }
  });
  return rows;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorCode::InvalidArgument, "slope fit needs two or more points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

std::vector<GrowthFit> fit_growth_slopes(const std::vector<GrowthRow>& rows) {
  std::vector<GrowthFit> fits;
  for (const auto& r : rows) {
    bool seen = false;
    for (const auto& f : fits) seen |= f.beta == r.beta;
    if (seen) continue;
    GrowthFit f;
    f.beta = r.beta;
    std::vector<double> x, yi, yg;
    bool all_positive = true;
    for (const auto& q : rows)
      if (q.beta == r.beta && q.converged) {
        all_positive &= q.c.imag() > 0.0;
        x.push_back(std::log(q.R));
        yi.push_back(std::log(std::abs(q.c.imag())));
        yg.push_back(std::log(std::abs(q.growth_rate)));
      }
    if (x.size() >= 2 && all_positive) {
      f.slope_im_c = fit_slope(x, yi);
      f.slope_growth = fit_slope(x, yg);
      f.valid = true;
    }
    fits.push_back(f);
  }
  return fits;
}

}  // namespace osm
