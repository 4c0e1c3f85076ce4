#include "osmodes/critical_layer.hpp"

#include <cmath>

#include "osmodes/errors.hpp"
#include "osmodes/jet.hpp"

namespace osm {

CriticalLayer::CriticalLayer(const RayleighLayer& ray, double alpha, double R)
    : ray_(ray), alpha_(alpha), R_(R) {
  if (!(alpha > 0.0) || !(R > 0.0))
    throw Error(ErrorCode::InvalidArgument, "alpha and R must be positive");
  eps_ = cplx(0.0, -1.0 / (alpha * R));
  uc1_ = ray_.profile().eval(ray_.z_c())[1];
  if (std::abs(uc1_) < 1e-10)
    throw Error(ErrorCode::DerivativeVanishes, "U' vanishes at the critical point");
  delta_ = std::pow(eps_ / uc1_, 1.0 / 3.0);
  gauss_legendre(40, gl_x_, gl_w_);
  taylor_c_.resize(24);
  ray_.profile().taylor(ray_.z_c(), 24, taylor_c_.data());
  build_langer();
  build_airy();
}

cplx CriticalLayer::eta_at(cplx z) const {
  cplx zc = ray_.z_c(), c = ray_.c();
  const ShearProfile& prof = ray_.profile();
  auto q = [&](cplx y) {
    cplx dy = y - zc;
    if (std::abs(dy) < 0.05) {
      cplx s = 0.0, pw = 1.0;
      for (size_t k = 1; k < taylor_c_.size(); ++k) {
        s += taylor_c_[k] * pw;
        pw *= dy;
      }
      return s / taylor_c_[1];
    }
    return (prof.value(y) - c) / (uc1_ * dy);
  };
  cplx dz = z - zc;
  cplx s = 0.0;
  for (size_t i = 0; i < gl_x_.size(); ++i) {
    double t = 0.5 * (gl_x_[i] + 1.0);
    s += 0.5 * gl_w_[i] * 2.0 * t * t * std::sqrt(q(zc + t * t * dz));
  }
  cplx F = std::pow(1.5 * s, 2.0 / 3.0);
  return dz * F;
}

void CriticalLayer::build_langer() {
  const auto& mesh = *ray_.mesh();
  size_t n = mesh.size();
  eta_.resize(n);
  X_.resize(n);
  zeta_.resize(n);
  zdot_.resize(n);
  eta2_.resize(n);
  for (auto& v : w_) v.resize(n);
  for (auto& v : m_) v.resize(n);
  cplx c = ray_.c();
  double a2 = alpha_ * alpha_;
  std::array<cplx, 7> tc;
  for (auto& v : etad_) v.resize(n);
  for (size_t i = 0; i < n; ++i) {
    cplx z = mesh.node(i);
    cplx eta0 = eta_at(z);
    ray_.profile().taylor(z, 7, tc.data());
    Jet<6> p;
    p.c[0] = (tc[0] - c) / uc1_;
    for (int k = 1; k <= 6; ++k) p.c[k] = tc[k] / uc1_;
    // eta' = (p / eta)^(1/2), branch matching the quadrature value near 1.
    cplx lead = std::sqrt(p.c[0] / eta0);
    if (std::abs(lead) < 1e-8) throw Error(ErrorCode::BranchFailure, "eta' vanishes on the contour");
    Jet<6> e;
    e.c[0] = eta0;
    e.c[1] = lead;
    for (int it = 0; it < 6; ++it) e = integrate_jet(pow_jet(p / e, 0.5, lead), eta0);
    Jet<6> ep = differentiate_jet(e);
    Jet<6> zd = Jet<6>::constant(1.0) / ep;
    Jet<6> w = pow_jet(zd, 0.5, std::sqrt(zd.c[0]));
    Jet<6> w2 = differentiate_jet(differentiate_jet(w));
    Jet<6> ratio = w2 / w;
    for (int k = 0; k <= 6; ++k) etad_[k][i] = e.deriv(k);
    eta_[i] = eta0;
    X_[i] = eta0 / delta_;
    zeta_[i] = airy_zeta(X_[i]);
    zdot_[i] = zd.c[0];
    eta2_[i] = e.deriv(2);
    for (int k = 0; k < 5; ++k) w_[k][i] = w.deriv(k);
    m_[0][i] = eps_ * (ratio.c[0] - 2.0 * a2);
    m_[1][i] = eps_ * ratio.deriv(1);
    m_[2][i] = eps_ * ratio.deriv(2);
  }
}

void CriticalLayer::build_airy() {
  const auto& mesh = *ray_.mesh();
  size_t n = mesh.size();
  for (auto& v : ai_) v.resize(n);
  for (auto& v : ci_) v.resize(n);
  for (size_t i = 0; i < n; ++i) {
    AiryQuad a = airy_ai_family(X_[i]).rescaled(-zeta_[i]);
    AiryQuad b = airy_ci_family(X_[i]).rescaled(zeta_[i]);
    ai_[0][i] = a.f, ai_[1][i] = a.df, ai_[2][i] = a.p1, ai_[3][i] = a.p2;
    ci_[0][i] = b.f, ci_[1][i] = b.df, ci_[2][i] = b.p1, ci_[3][i] = b.p2;
  }
  CVec minus_zeta(n), f(n);
  for (size_t i = 0; i < n; ++i) minus_zeta[i] = -zeta_[i];
  // Wall-anchored primitives of the Ci-type weight.
  for (size_t i = 0; i < n; ++i) f[i] = w_[0][i] * ci_[0][i] / delta_;
  ct_[0] = mesh.scaled_forward(f, zeta_);
  for (size_t i = 0; i < n; ++i) f[i] = ct_[0][i] / delta_;
  ct_[1] = mesh.scaled_forward(f, zeta_);
  // Ai-type primitives from infinity: tail beyond z = 1 frozen at the end value of zdot.
  size_t e = n - 1;
  cplx zd1 = zdot_[e];
  cplx tail1 = std::pow(zd1, 1.5) * ai_[2][e], tail2 = std::pow(zd1, 2.5) * ai_[3][e];
  for (size_t i = 0; i < n; ++i) f[i] = w_[0][i] * ai_[0][i] / delta_;
  CVec b1 = mesh.scaled_backward(f, minus_zeta);
  at_[0].resize(n);
  for (size_t i = 0; i < n; ++i) at_[0][i] = std::exp(zeta_[i] - zeta_[e]) * tail1 - b1[i];
  for (size_t i = 0; i < n; ++i) f[i] = at_[0][i] / delta_;
  CVec b2 = mesh.scaled_backward(f, minus_zeta);
  at_[1].resize(n);
  for (size_t i = 0; i < n; ++i) at_[1][i] = std::exp(zeta_[i] - zeta_[e]) * tail2 - b2[i];
}

cplx CriticalLayer::weighted_primitive(AiryKind kind, int order, size_t i) const {
  if (order != 1 && order != 2) throw Error(ErrorCode::UnsupportedOrder, "weighted primitives have order 1 or 2");
  if (kind == AiryKind::Ai) return at_[order - 1][i] * std::exp(-zeta_[i]);
  return ct_[order - 1][i] * std::exp(zeta_[i]);
}

cplx CriticalLayer::green_branch(size_t ix, size_t iz, GreenBranch b, GreenPart part, int k) const {
  if (k < 0 || k > 3) throw Error(ErrorCode::UnsupportedOrder, "kernel derivative order must lie in [0,3]");
  const auto& z = ray_.mesh()->nodes();
  cplx zc = ray_.z_c(), d = delta_;
  cplx pref = w_[0][ix] / uc1_;
  cplx a1 = ci_[0][ix] * at_[0][ix] - ai_[0][ix] * ct_[0][ix];
  cplx a2 = ai_[0][ix] * ct_[1][ix] - ci_[0][ix] * at_[1][ix];
  // k-th derivative in z of a second weighted primitive (mantissa).
  auto prim2 = [&](const std::array<CVec, 2>& t, const std::array<CVec, 4>& fam) -> cplx {
    switch (k) {
      case 0: return t[1][iz];
      case 1: return t[0][iz] / d;
      case 2: return w_[0][iz] * fam[0][iz] / (d * d);
      default: return (w_[1][iz] * fam[0][iz] + fam[1][iz] / (w_[0][iz] * d)) / (d * d);
    }
  };
  cplx loc = 0.0, non = 0.0;
  if (b == GreenBranch::Above) {
    loc = ai_[0][ix] * prim2(ct_, ci_) * std::exp(zeta_[iz] - zeta_[ix]);
    non = a1 * (k == 0 ? (z[iz] - zc) / d : k == 1 ? 1.0 / d : cplx(0.0));
  } else {
    loc = ci_[0][ix] * prim2(at_, ai_) * std::exp(zeta_[ix] - zeta_[iz]);
    non = k == 0 ? a2 + a1 * (z[ix] - zc) / d : cplx(0.0);
  }
  cplx v = part == GreenPart::Localized ? loc : part == GreenPart::NonLocalized ? non : loc + non;
  return pref * v;
}

cplx CriticalLayer::green(size_t ix, size_t iz, GreenPart part, int k) const {
  return green_branch(ix, iz, ix > iz ? GreenBranch::Above : GreenBranch::Below, part, k);
}

MeshFunction CriticalLayer::solve(const MeshFunction& g) const {
  const auto& mesh = *ray_.mesh();
  size_t n = mesh.size();
  const auto& z = mesh.nodes();
  cplx zc = ray_.z_c(), d = delta_;
  CVec fa(n), fc(n), f1(n), f2(n), mz(n);
  for (size_t i = 0; i < n; ++i) {
    cplx p = w_[0][i] * g.d[0][i] / uc1_;
    cplx a1 = ci_[0][i] * at_[0][i] - ai_[0][i] * ct_[0][i];
    cplx a2 = ai_[0][i] * ct_[1][i] - ci_[0][i] * at_[1][i];
    fa[i] = ai_[0][i] * p;
    fc[i] = ci_[0][i] * p;
    f1[i] = a1 * p;
    f2[i] = (a2 + a1 * (z[i] - zc) / d) * p;
    mz[i] = -zeta_[i];
  }
  CVec JA = mesh.scaled_backward(fa, mz);
  CVec JC = mesh.scaled_forward(fc, zeta_);
  CVec J1 = mesh.cumulative_back(f1);
  CVec J2 = mesh.cumulative(f2);
  MeshFunction out(ray_.mesh(), 4);
  out.log_scale = g.log_scale;
  const auto& u = ray_.u();
  cplx d2 = d * d;
  for (size_t i = 0; i < n; ++i) {
    out.d[0][i] = -(ct_[1][i] * JA[i] + (z[i] - zc) / d * J1[i] + at_[1][i] * JC[i] + J2[i]);
    out.d[1][i] = -(ct_[0][i] * JA[i] + J1[i] + at_[0][i] * JC[i]) / d;
    cplx K0 = ci_[0][i] * JA[i] + ai_[0][i] * JC[i];
    cplx K1 = ci_[1][i] * JA[i] + ai_[1][i] * JC[i];
    cplx s2 = -w_[0][i] * K0 / d2;
    out.d[2][i] = s2;
    out.d[3][i] = -(w_[1][i] * K0 + K1 / (w_[0][i] * d)) / d2;
    cplx coef = u[0][i] - ray_.c() + eps_ * w_[2][i] / w_[0][i];
    out.d[4][i] = (g.d[0][i] + coef * s2) / eps_;
  }
  return out;
}

MeshFunction CriticalLayer::err_from_solution(const MeshFunction& s) const {
  size_t n = s.size();
  MeshFunction out(ray_.mesh(), 2);
  out.log_scale = s.log_scale;
  for (size_t i = 0; i < n; ++i) {
    out.d[0][i] = m_[0][i] * s.d[2][i];
    out.d[1][i] = m_[1][i] * s.d[2][i] + m_[0][i] * s.d[3][i];
    out.d[2][i] = m_[2][i] * s.d[2][i] + 2.0 * m_[1][i] * s.d[3][i] + m_[0][i] * s.d[4][i];
  }
  return out;
}

MeshFunction CriticalLayer::err(const MeshFunction& g, const MeshFunction* solved) const {
  if (solved) return err_from_solution(*solved);
  return err_from_solution(solve(g));
}

MeshFunction CriticalLayer::solve_inf(const MeshFunction& g, double tol, SeriesInfo* info) const {
  SeriesInfo local;
  SeriesInfo& inf = info ? *info : local;
  inf = {};
  MeshFunction total(ray_.mesh(), 4);
  total.log_scale = g.log_scale;
  MeshFunction e(ray_.mesh(), 0);
  e.log_scale = g.log_scale;
  e.d[0] = g.d[0];
  double g0 = e.sup(0);
  if (g0 == 0.0) {
    inf.converged = true;
    return total;
  }
  inf.term_norms.push_back(g0);
  for (int it = 0; it < 60; ++it) {
    MeshFunction s = solve(e);
    for (int k = 0; k <= 4; ++k)
      for (size_t i = 0; i < s.size(); ++i) total.d[k][i] += s.d[k][i];
    for (size_t i = 0; i < s.size(); ++i) e.d[0][i] = -m_[0][i] * s.d[2][i];
    double en = e.sup(0);
    inf.term_norms.push_back(en);
    if (en < tol * g0) {
      inf.converged = true;
      return total;
    }
    size_t m = inf.term_norms.size();
    if (m >= 4 && inf.term_norms[m - 1] >= inf.term_norms[m - 2] &&
        inf.term_norms[m - 2] >= inf.term_norms[m - 3] && inf.term_norms[m - 3] >= inf.term_norms[m - 4])
      throw Error(ErrorCode::SeriesDiverging, "AiryErr Neumann series is not contracting");
  }
  throw Error(ErrorCode::SeriesDiverging, "AiryErr Neumann series did not reach tolerance");
}

MeshFunction CriticalLayer::solve_singular(const MeshFunction& f) const {
  if (f.order() < 4) throw Error(ErrorCode::InvalidArgument, "source needs four derivatives");
  double scale = std::max(1.0, f.sup(0));
  if (std::abs(f.at(1, f.size() - 1)) > 1e-8 * scale)
    throw Error(ErrorCode::HypothesisViolated, "f'(1) must vanish");
  MeshFunction g(ray_.mesh(), 0);
  g.log_scale = f.log_scale;
  for (size_t i = 0; i < f.size(); ++i) g.d[0][i] = eps_ * f.d[4][i];
  return solve(g);
}

CVec CriticalLayer::apply_airy(const MeshFunction& phi) const {
  const auto& mesh = *ray_.mesh();
  CVec d2 = mesh.derivative(phi.d[1]);
  CVec d4 = mesh.derivative(phi.d[3]);
  const auto& u = ray_.u();
  CVec out(mesh.size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = (eps_ * d4[i] - (u[0][i] - ray_.c() + 2.0 * eps_ * alpha_ * alpha_) * d2[i]);
  return out;
}

}  // namespace osm
