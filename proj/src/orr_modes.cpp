#include "osmodes/orr_modes.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "osmodes/errors.hpp"
#include "osmodes/jet.hpp"

namespace osm {

OrrContext::OrrContext(const ShearProfile& profile, double alpha, double R, cplx c,
                       const NumericsOptions& opt, cplx zc_guess)
    : profile_(profile), alpha_(alpha), R_(R), c_(c), opt_(opt) {
  if (!(alpha > 0.0) || !(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha and R must be positive");
  if (zc_guess == 0.0) {
    double s = profile_.wall_slope();
    zc_guess = s != 0.0 ? (c - profile_.wall_value()) / s : cplx(0.1);
  }
  cp_ = find_critical_point(profile_, c, zc_guess);
  cplx eps(0.0, -1.0 / (alpha * R));
  cplx delta = std::pow(eps / profile_.eval(cp_.z_c)[1], 1.0 / 3.0);
  mesh_ = std::make_shared<ContourMesh>(cp_.z_c, std::abs(delta), opt_.mesh);
  ray_ = std::make_unique<RayleighLayer>(profile_, c, cp_.z_c, mesh_);
  crit_ = std::make_unique<CriticalLayer>(*ray_, alpha, R);
}

MeshFunction OrrContext::reg(const MeshFunction& f) const {
  int order = std::min(2, f.order());
  MeshFunction out(mesh_, order);
  out.log_scale = f.log_scale;
  const auto& u = ray_->u();
  cplx e = eps();
  double a2 = alpha_ * alpha_;
  for (size_t i = 0; i < f.size(); ++i) {
    cplx r0 = -(e * a2 * a2 + u[2][i] + a2 * (u[0][i] - c_));
    cplx r1 = -(u[3][i] + a2 * u[1][i]);
    cplx r2 = -(u[4][i] + a2 * u[2][i]);
    out.d[0][i] = r0 * f.d[0][i];
    if (order >= 1) out.d[1][i] = r1 * f.d[0][i] + r0 * f.d[1][i];
    if (order >= 2) out.d[2][i] = r2 * f.d[0][i] + 2.0 * r1 * f.d[1][i] + r0 * f.d[2][i];
  }
  return out;
}

MeshFunction OrrContext::diff(const MeshFunction& f) const {
  if (f.order() < 4) throw Error(ErrorCode::InvalidArgument, "Diff needs four derivatives");
  MeshFunction out(mesh_, 0);
  out.log_scale = f.log_scale;
  cplx e = eps();
  double a2 = alpha_ * alpha_;
  for (size_t i = 0; i < f.size(); ++i)
    out.d[0][i] = -e * (f.d[4][i] - 2.0 * a2 * f.d[2][i] + a2 * a2 * f.d[0][i]);
  return out;
}

namespace {

struct StepResult {
  MeshFunction corr;
  MeshFunction next;
};

StepResult iter_step(const OrrContext& ctx, const MeshFunction& f) {
  const auto& opt = ctx.options();
  MeshFunction psi = scaled(ctx.rayleigh().solve_alpha(f, ctx.alpha(), opt.series_tol), -1.0);
  MeshFunction D = ctx.diff(psi);
  MeshFunction S = ctx.critical().solve(D);
  MeshFunction next = combine(ctx.reg(S), -1.0, ctx.critical().err_from_solution(S));
  MeshFunction corr = combine(psi, 1.0, S);
  return {std::move(corr), std::move(next)};
}

double sup_value(const MeshFunction& f) {
  double m = 0.0;
  for (cplx v : f.d[0]) m = std::max(m, std::abs(v));
  return m;
}

// Flattened orders 0..2 with weights |delta|^k.
CVec flatten(const MeshFunction& f, double dscale) {
  size_t n = f.size();
  CVec v(3 * n);
  double w = 1.0;
  for (int k = 0; k < 3; ++k, w *= dscale)
    for (size_t i = 0; i < n; ++i) v[k * n + i] = w * f.d[k][i];
  return v;
}

MeshFunction unflatten(const CVec& v, const std::shared_ptr<const ContourMesh>& mesh, double dscale,
                       double log_scale) {
  size_t n = mesh->size();
  MeshFunction f(mesh, 2);
  f.log_scale = log_scale;
  double w = 1.0;
  for (int k = 0; k < 3; ++k, w *= dscale)
    for (size_t i = 0; i < n; ++i) f.d[k][i] = v[k * n + i] / w;
  return f;
}

double norm2(const CVec& v) {
  double s = 0.0;
  for (cplx x : v) s += std::norm(x);
  return std::sqrt(s);
}

cplx dot(const CVec& a, const CVec& b) {
  cplx s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Restarted GMRES for (1 - Iter) J = b.
MeshFunction gmres_solve(const OrrContext& ctx, const MeshFunction& b, double tol, int max_iter,
                         std::vector<double>* history) {
  const auto& mesh = ctx.mesh();
  double ds = std::abs(ctx.delta());
  double ls = b.log_scale;
  CVec rhs = flatten(b, ds);
  double bn = norm2(rhs);
  CVec x(rhs.size(), 0.0);
  if (bn == 0.0) return unflatten(x, mesh, ds, ls);
  auto apply = [&](const CVec& v) {
    MeshFunction f = unflatten(v, mesh, ds, ls);
    MeshFunction it = iter_step(ctx, f).next;
    CVec r = flatten(it, ds);
    for (size_t i = 0; i < r.size(); ++i) r[i] = v[i] - r[i];
    return r;
  };
  const int m = 30;
  int used = 0;
  while (used < max_iter) {
    CVec ax = apply(x);
    CVec r(rhs.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - ax[i];
    double beta = norm2(r);
    if (history) history->push_back(beta / bn);
    if (beta <= tol * bn) break;
    std::vector<CVec> V{r};
    for (auto& v : V[0]) v /= beta;
    std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, 0.0));
    std::vector<cplx> cs(m), sn(m), g(m + 1, 0.0);
    g[0] = beta;
    int k = 0;
    for (; k < m && used < max_iter; ++k, ++used) {
      CVec w = apply(V[k]);
      for (int j = 0; j <= k; ++j) {
        H[j][k] = dot(V[j], w);
        for (size_t i = 0; i < w.size(); ++i) w[i] -= H[j][k] * V[j][i];
      }
      double hn = norm2(w);
      H[k + 1][k] = hn;
      for (int j = 0; j < k; ++j) {
        cplx t = std::conj(cs[j]) * H[j][k] + std::conj(sn[j]) * H[j + 1][k];
        H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
        H[j][k] = t;
      }
      double den = std::sqrt(std::norm(H[k][k]) + hn * hn);
      cs[k] = H[k][k] / den;
      sn[k] = hn / den;
      H[k][k] = den;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];
      if (history) history->push_back(std::abs(g[k + 1]) / bn);
      if (hn == 0.0 || std::abs(g[k + 1]) <= tol * bn) {
        ++k;
        ++used;
        break;
      }
      for (auto& v : w) v /= hn;
      V.push_back(std::move(w));
    }
    std::vector<cplx> y(k);
    for (int i = k - 1; i >= 0; --i) {
      cplx s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
      y[i] = s / H[i][i];
    }
    for (int j = 0; j < k; ++j)
      for (size_t i = 0; i < x.size(); ++i) x[i] += y[j] * V[j][i];
    if (std::abs(g[k]) <= tol * bn) break;
  }
  CVec ax = apply(x);
  double res = 0.0;
  for (size_t i = 0; i < ax.size(); ++i) res += std::norm(rhs[i] - ax[i]);
  if (std::sqrt(res) > 1e3 * tol * bn)
    throw Error(ErrorCode::SeriesDiverging, "GMRES on the Iter equation did not converge");
  return unflatten(x, mesh, ds, ls);
}

}  // namespace

MeshFunction OrrContext::iter(const MeshFunction& f) const { return iter_step(*this, f).next; }
MeshFunction OrrContext::correction(const MeshFunction& f) const { return iter_step(*this, f).corr; }

CVec OrrContext::orr_residual(const MeshFunction& phi) const {
  auto [a, b] = orr_two_ways(phi);
  (void)b;
  return a;
}

std::pair<CVec, CVec> OrrContext::orr_two_ways(const MeshFunction& phi) const {
  CVec ray = ray_->apply(phi, alpha_);
  CVec airy = crit_->apply_airy(phi);
  size_t n = phi.size();
  const auto& u = ray_->u();
  const auto& mesh = *mesh_;
  CVec d2 = mesh.derivative(phi.d[1]);
  CVec d4 = mesh.derivative(phi.d[3]);
  cplx e = eps();
  double a2 = alpha_ * alpha_;
  CVec first(n), second(n);
  for (size_t i = 0; i < n; ++i) {
    cplx p = phi.d[0][i];
    cplx dif = -e * (d4[i] - 2.0 * a2 * d2[i] + a2 * a2 * p);
    cplx rg = -(e * a2 * a2 + u[2][i] + a2 * (u[0][i] - c_)) * p;
    first[i] = ray[i] + dif;
    second[i] = rg - airy[i];
  }
  return {first, second};
}

MeshFunction iterate_corrections(const OrrContext& ctx, const MeshFunction& i0, double tol,
                                 std::vector<double>* history, std::string* solver_used) {
  const auto& opt = ctx.options();
  double n0 = sup_value(i0);
  MeshFunction total(ctx.mesh(), 4);
  total.log_scale = i0.log_scale;
  if (n0 == 0.0) {
    if (solver_used) *solver_used = "none";
    return total;
  }
  if (opt.solver != LinearSolver::Gmres) {
    std::vector<double> hist{n0};
    MeshFunction I = i0;
    bool ok = false;
    int rises = 0;
    for (int it = 0; it < opt.max_iter; ++it) {
      StepResult s = iter_step(ctx, I);
      total = combine(total, 1.0, s.corr);
      I = std::move(s.next);
      double h = sup_value(I);
      hist.push_back(h);
      if (h < tol * n0) {
        ok = true;
        break;
      }
      rises = h >= hist[hist.size() - 2] ? rises + 1 : 0;
      if (rises >= 3 || h > 1e6 * n0) break;
    }
    if (history) *history = hist;
    if (ok) {
      if (solver_used) *solver_used = "neumann";
      return total;
    }
    if (opt.solver == LinearSolver::Neumann)
      throw Error(ErrorCode::SeriesDiverging, "Iter series is not contracting");
  }
  std::vector<double> hist;
  MeshFunction J = gmres_solve(ctx, i0, tol, opt.max_iter, &hist);
  if (history) *history = hist;
  if (solver_used) *solver_used = "gmres";
  return iter_step(ctx, J).corr;
}

std::pair<MeshFunction, MeshFunction> build_slow_modes(const OrrContext& ctx,
                                                       std::array<std::vector<double>, 2>* hist) {
  std::array<MeshFunction, 2> out;
  for (int j = 1; j <= 2; ++j) {
    const auto& opt = ctx.options();
    MeshFunction seed = ctx.rayleigh().phi_j_alpha(j, ctx.alpha(), opt.series_tol, opt.max_alpha);
    MeshFunction S0 = ctx.critical().solve(ctx.diff(seed));
    MeshFunction i0 = combine(ctx.reg(S0), -1.0, ctx.critical().err_from_solution(S0));
    MeshFunction corr = iterate_corrections(ctx, i0, opt.iter_tol, hist ? &(*hist)[j - 1] : nullptr, nullptr);
    out[j - 1] = combine(combine(seed, 1.0, S0), 1.0, corr);
  }
  return {std::move(out[0]), std::move(out[1])};
}

MeshFunction fast_seed(const OrrContext& ctx, int j) {
  if (j != 3 && j != 4) throw Error(ErrorCode::InvalidArgument, "fast seeds are phi_3 and phi_4");
  const auto& cl = ctx.critical();
  size_t n = ctx.mesh()->size();
  const auto& fam = j == 3 ? cl.ai() : cl.ci();
  const auto& zeta = cl.zeta();
  const auto& X = cl.X();
  const auto& ed = cl.eta_derivs();
  cplx d = cl.delta();
  MeshFunction out(ctx.mesh(), 6);
  cplx shift;
  cplx norm = 1.0;
  if (j == 3) {
    // Normalize by Ai(2, Z(0)).
    shift = zeta[0];
    norm = 1.0 / fam[3][0];
    out.log_scale = 0.0;
  } else {
    out.log_scale = std::max(0.0, zeta[n - 1].real());
  }
  for (size_t i = 0; i < n; ++i) {
    cplx x = X[i], f = fam[0][i], df = fam[1][i];
    cplx fd[7] = {fam[3][i], fam[2][i], f, df, x * f, f + x * df, 2.0 * df + x * x * f};
    cplx der[7];
    for (int k = 0; k <= 6; ++k) der[k] = ed[k][i] / d;
    Jet<6> Z = Jet<6>::from_derivs(der, 7);
    Jet<6> r = compose(fd, Z);
    cplx scale = j == 3 ? std::exp(shift - zeta[i]) * norm : std::exp(zeta[i] - out.log_scale);
    for (int k = 0; k <= 6; ++k) out.d[k][i] = r.deriv(k) * scale;
  }
  return out;
}

namespace {

// Orr(phi) with derivatives 0..2 from phi carrying orders 0..6.
MeshFunction orr_of_seed(const OrrContext& ctx, const MeshFunction& p) {
  MeshFunction out(ctx.mesh(), 2);
  out.log_scale = p.log_scale;
  const auto& u = ctx.rayleigh().u();
  cplx e = ctx.eps(), c = ctx.c();
  double a2 = ctx.alpha() * ctx.alpha(), a4 = a2 * a2;
  for (size_t i = 0; i < p.size(); ++i) {
    cplx f[7];
    for (int k = 0; k <= 6; ++k) f[k] = p.d[k][i];
    cplx uc = u[0][i] - c;
    // Orr = (U - c)(d^2 - a^2) - U'' - eps (d^2 - a^2)^2, differentiated twice.
    out.d[0][i] = uc * (f[2] - a2 * f[0]) - u[2][i] * f[0] - e * (f[4] - 2.0 * a2 * f[2] + a4 * f[0]);
    out.d[1][i] = u[1][i] * (f[2] - a2 * f[0]) + uc * (f[3] - a2 * f[1]) - u[3][i] * f[0] -
                  u[2][i] * f[1] - e * (f[5] - 2.0 * a2 * f[3] + a4 * f[1]);
    out.d[2][i] = u[2][i] * (f[2] - a2 * f[0]) + 2.0 * u[1][i] * (f[3] - a2 * f[1]) +
                  uc * (f[4] - a2 * f[2]) - u[4][i] * f[0] - 2.0 * u[3][i] * f[1] - u[2][i] * f[2] -
                  e * (f[6] - 2.0 * a2 * f[4] + a4 * f[2]);
  }
  return out;
}

MeshFunction truncate(const MeshFunction& f, int order) {
  MeshFunction r = f;
  r.d.resize(order + 1);
  return r;
}

}  // namespace

std::pair<MeshFunction, MeshFunction> build_fast_modes(const OrrContext& ctx,
                                                       std::array<std::vector<double>, 2>* hist) {
  std::array<MeshFunction, 2> out;
  const auto& opt = ctx.options();
  for (int j = 3; j <= 4; ++j) {
    MeshFunction seed = fast_seed(ctx, j);
    MeshFunction i0 = orr_of_seed(ctx, seed);
    MeshFunction phi1 = ctx.critical().solve_inf(i0, opt.series_tol);
    MeshFunction i1 = ctx.reg(phi1);
    MeshFunction corr = iterate_corrections(ctx, i1, opt.iter_tol, hist ? &(*hist)[j - 3] : nullptr, nullptr);
    out[j - 3] = combine(combine(truncate(seed, 4), 1.0, phi1), 1.0, corr);
  }
  return {std::move(out[0]), std::move(out[1])};
}

OrrModeSet build_modes(const OrrContext& ctx) {
  OrrModeSet set;
  std::array<std::vector<double>, 2> hs, hf;
  auto [p1, p2] = build_slow_modes(ctx, &hs);
  auto [p3, p4] = build_fast_modes(ctx, &hf);
  set.phi = {std::move(p1), std::move(p2), std::move(p3), std::move(p4)};
  set.iter_history = {hs[0], hs[1], hf[0], hf[1]};
  compute_ratios(set);
  return set;
}

void compute_ratios(OrrModeSet& m) {
  for (int j = 0; j < 4; ++j) {
    const auto& f = m.phi[j];
    size_t e = f.size() - 1;
    for (int k = 0; k < 4; ++k) {
      m.at0[j][k] = f.d[k][0];
      m.at1[j][k] = f.d[k][e];
    }
    m.log_scale[j] = f.log_scale;
  }
  auto ratio = [](cplx a, cplx b) {
    if (!(std::abs(b) > 0.0) || !std::isfinite(std::abs(b)))
      throw Error(ErrorCode::DegenerateDenominator, "boundary ratio has a vanishing denominator");
    return a / b;
  };
  m.K1 = ratio(m.at0[0][0], m.at0[0][1]);
  m.K2 = ratio(m.at1[0][1], m.at1[1][1]);
  m.K3 = ratio(m.at0[2][0], m.at0[2][1]);
  m.K4 = ratio(m.at1[3][1], m.at1[3][3]);
}

ContractionReport measure_contraction(const OrrContext& ctx) {
  const auto& mesh = ctx.mesh();
  size_t n = mesh->size();
  cplx zc = ctx.critical_point().z_c;
  double ad = std::abs(ctx.delta());
  const double pi = std::numbers::pi;
  // Probe f with f, f', f''.
  using Fn = std::function<std::array<cplx, 3>(cplx)>;
  std::vector<Fn> probes = {
      [](cplx) { return std::array<cplx, 3>{1.0, 0.0, 0.0}; },
      [](cplx z) { return std::array<cplx, 3>{z, 1.0, 0.0}; },
      [](cplx z) { return std::array<cplx, 3>{z * z, 2.0 * z, 2.0}; },
      [&](cplx z) { return std::array<cplx, 3>{std::cos(pi * z), -pi * std::sin(pi * z), -pi * pi * std::cos(pi * z)}; },
      [&](cplx z) { return std::array<cplx, 3>{std::sin(2 * pi * z), 2 * pi * std::cos(2 * pi * z), -4 * pi * pi * std::sin(2 * pi * z)}; },
      [](cplx z) { return std::array<cplx, 3>{std::exp(-z), -std::exp(-z), std::exp(-z)}; },
      [&](cplx z) {
        cplx t = z - zc, l = std::log(t);
        return std::array<cplx, 3>{t * l, l + 1.0, 1.0 / t};
      },
      [&](cplx z) {
        cplx t = z - zc, l = std::log(t);
        return std::array<cplx, 3>{t * t * l, 2.0 * t * l + t, 2.0 * l + 3.0};
      },
      [&](cplx z) {
        cplx s = 4.0 * ad, t = (z - zc) / s, g = std::exp(-t * t);
        return std::array<cplx, 3>{g, -2.0 * t * g / s, (4.0 * t * t - 2.0) * g / (s * s)};
      },
      [&](cplx z) {
        cplx s = 5.0 * ad, t = std::tanh((z - zc.real()) / s), sech2 = 1.0 - t * t;
        return std::array<cplx, 3>{t, sech2 / s, -2.0 * t * sech2 / (s * s)};
      },
      [&](cplx z) {
        auto u = ctx.profile().eval(z);
        return std::array<cplx, 3>{u[0] - ctx.c(), u[1], u[2]};
      },
      [](cplx z) {
        cplx e = std::exp(2.0 * z), s = std::sin(3.0 * z), c = std::cos(3.0 * z);
        return std::array<cplx, 3>{e * s, e * (2.0 * s + 3.0 * c), e * (-5.0 * s + 12.0 * c)};
      },
  };
  ContractionReport rep;
  for (const auto& p : probes) {
    MeshFunction f(mesh, 2);
    for (size_t i = 0; i < n; ++i) {
      auto v = p(mesh->node(i));
      for (int k = 0; k < 3; ++k) f.d[k][i] = v[k];
    }
    MeshFunction g = ctx.iter(f);
    double r = norm_report(g, zc, 2).x[2] / norm_report(f, zc, 2).x[2];
    rep.ratios.push_back(r);
    rep.kappa = std::max(rep.kappa, r);
  }
  return rep;
}

std::array<cplx, 2> continue_mode(const OrrContext& ctx, const MeshFunction& phi, cplx target) {
  const auto& mesh = *ctx.mesh();
  size_t i0 = mesh.nearest(target);
  cplx z = mesh.node(i0);
  std::array<cplx, 4> st;
  for (int k = 0; k < 4; ++k) st[k] = phi.d[k][i0];
  cplx e = ctx.eps(), c = ctx.c();
  double a2 = ctx.alpha() * ctx.alpha(), a4 = a2 * a2;
  double hmax = std::min(0.02, 0.3 * std::abs(ctx.delta()));
  constexpr int M = 48;
  std::array<cplx, M + 3> t;
  std::array<cplx, M> a, b, u2;
  cplx total = target - z;
  double len = std::abs(total), done = 0.0;
  while (done < len) {
    double step = std::min(hmax, len - done);
    cplx h = step * total / len;
    ctx.profile().taylor(z, M + 2, t.data());
    for (int k = 0; k < M; ++k) {
      b[k] = t[k] - (k == 0 ? c : 0.0);
      u2[k] = double(k + 2) * double(k + 1) * t[k + 2];
    }
    a.fill(0.0);
    a[0] = st[0], a[1] = st[1], a[2] = st[2] / 2.0, a[3] = st[3] / 6.0;
    for (int n = 0; n + 4 < M; ++n) {
      cplx rhs = 0.0;
      for (int j = 0; j <= n; ++j) {
        int m = n - j;
        rhs += b[j] * (double(m + 2) * (m + 1) * a[m + 2] - a2 * a[m]) - u2[j] * a[m];
      }
      double f4 = double(n + 4) * (n + 3) * (n + 2) * (n + 1);
      a[n + 4] = (rhs / e + 2.0 * a2 * double(n + 2) * (n + 1) * a[n + 2] - a4 * a[n]) / f4;
    }
    std::array<cplx, 4> ns{};
    for (int k = 0; k < 4; ++k) {
      cplx s = 0.0, hp = 1.0;
      for (int n = k; n < M; ++n) {
        double ff = 1.0;
        for (int q = 0; q < k; ++q) ff *= (n - q);
        s += ff * a[n] * hp;
        hp *= h;
      }
      ns[k] = s;
    }
    st = ns;
    z += h;
    done += step;
  }
  return {st[0], st[1]};
}

}  // namespace osm
