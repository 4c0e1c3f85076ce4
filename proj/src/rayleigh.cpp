#include "osmodes/rayleigh.hpp"

#include <algorithm>
#include <cmath>

#include "osmodes/errors.hpp"

namespace osm {

namespace {

// int_a^b g along the straight segment, split into pieces.
template <class G>
cplx segment_integral(cplx a, cplx b, G g, int pieces = 8) {
  static std::vector<double> x, w;
  static const bool init = (gauss_legendre(20, x, w), true);
  (void)init;
  cplx total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    cplx pa = a + (b - a) * (double(p) / pieces), pb = a + (b - a) * (double(p + 1) / pieces);
    cplx h = (pb - pa) / 2.0, m = (pa + pb) / 2.0;
    for (size_t i = 0; i < x.size(); ++i) total += w[i] * g(m + h * x[i]) * h;
  }
  return total;
}

}  // namespace

RayleighLayer::RayleighLayer(const ShearProfile& profile, cplx c, cplx z_c,
                             std::shared_ptr<const ContourMesh> mesh)
    : profile_(profile), c_(c), z_c_(z_c), mesh_(std::move(mesh)) {
  size_t n = mesh_->size();
  for (auto& v : u_) v.resize(n);
  for (auto& v : r_) v.resize(n);
  for (size_t i = 0; i < n; ++i) {
    auto e = profile_.eval(mesh_->node(i));
    for (int k = 0; k < 5; ++k) u_[k][i] = e[k];
    cplx r = 1.0 / (e[0] - c_);
    r_[0][i] = r;
    r_[1][i] = -e[1] * r * r;
    r_[2][i] = -e[2] * r * r + 2.0 * e[1] * e[1] * r * r * r;
  }
  CVec r2(n);
  for (size_t i = 0; i < n; ++i) r2[i] = r_[0][i] * r_[0][i];
  CVec cum = mesh_->cumulative(r2);
  size_t ia = mesh_->nearest(0.5);
  auto g = [&](cplx y) {
    cplx v = 1.0 / (profile_.value(y) - c_);
    return v * v;
  };
  cplx offset = cum[ia] + segment_integral(mesh_->node(ia), 0.5, g);
  integral_r2_.resize(n);
  for (size_t i = 0; i < n; ++i) integral_r2_[i] = cum[i] - offset;

  phi10_ = MeshFunction(mesh_, 4);
  phi20_ = MeshFunction(mesh_, 4);
  for (size_t i = 0; i < n; ++i) {
    cplx I = integral_r2_[i], r = r_[0][i];
    phi10_.d[0][i] = u_[0][i] - c_;
    for (int k = 1; k <= 4; ++k) phi10_.d[k][i] = u_[k][i];
    phi20_.d[0][i] = (u_[0][i] - c_) * I;
    phi20_.d[1][i] = u_[1][i] * I + r;
    phi20_.d[2][i] = u_[2][i] * I;
    phi20_.d[3][i] = u_[3][i] * I + u_[2][i] * r * r;
    phi20_.d[4][i] = u_[4][i] * I + u_[3][i] * r * r + 2.0 * u_[2][i] * r * r_[1][i];
  }
}

cplx RayleighLayer::phi20_at(cplx z) const {
  size_t i = mesh_->nearest(z);
  auto g = [&](cplx y) {
    cplx v = 1.0 / (profile_.value(y) - c_);
    return v * v;
  };
  cplx I = integral_r2_[i] + segment_integral(mesh_->node(i), z, g, 4);
  return (profile_.value(z) - c_) * I;
}

cplx RayleighLayer::green0(cplx x, cplx z) const {
  cplx ux = profile_.value(x) - c_;
  // Branches are ordered by position along the contour, here by real part.
  if (z.real() > x.real()) return phi10_at(z) * phi20_at(x) / ux;
  return phi10_at(x) * phi20_at(z) / ux;
}

void RayleighLayer::convolve0(const CVec& f, CVec& v, CVec& dv) const {
  size_t n = mesh_->size();
  CVec a(n);
  for (size_t i = 0; i < n; ++i) a[i] = phi20_.d[0][i] * f[i] * r_[0][i];
  CVec A = mesh_->cumulative(a);
  CVec B = mesh_->cumulative_back(f);
  v.resize(n);
  dv.resize(n);
  for (size_t i = 0; i < n; ++i) {
    v[i] = -(phi10_.d[0][i] * A[i] + phi20_.d[0][i] * B[i]);
    dv[i] = -(phi10_.d[1][i] * A[i] + phi20_.d[1][i] * B[i]);
  }
}

void RayleighLayer::complete(MeshFunction& phi, const MeshFunction& f, double alpha) const {
  size_t n = mesh_->size();
  int order = std::min(4, 2 + f.order());
  phi.d.resize(order + 1, CVec(n));
  double a2 = alpha * alpha;
  double fs = std::exp(f.log_scale - phi.log_scale);
  for (size_t i = 0; i < n; ++i) {
    const cplx r = r_[0][i], r1 = r_[1][i], r2 = r_[2][i];
    cplx p0 = phi.d[0][i], p1 = phi.d[1][i];
    cplx h = u_[2][i] * p0 + fs * f.d[0][i];
    cplx p2 = a2 * p0 + h * r;
    phi.d[2][i] = p2;
    if (order < 3) continue;
    cplx h1 = u_[3][i] * p0 + u_[2][i] * p1 + fs * f.d[1][i];
    cplx p3 = a2 * p1 + h1 * r + h * r1;
    phi.d[3][i] = p3;
    if (order < 4) continue;
    cplx h2 = u_[4][i] * p0 + 2.0 * u_[3][i] * p1 + u_[2][i] * p2 + fs * f.d[2][i];
    phi.d[4][i] = a2 * p2 + h2 * r + 2.0 * h1 * r1 + h * r2;
  }
}

MeshFunction RayleighLayer::solve0(const MeshFunction& f) const {
  MeshFunction out(mesh_, 1);
  out.log_scale = f.log_scale;
  convolve0(f.d[0], out.d[0], out.d[1]);
  complete(out, f, 0.0);
  return out;
}

MeshFunction RayleighLayer::solve_alpha(const MeshFunction& f, double alpha, double tol,
                                        SeriesInfo* info) const {
  size_t n = mesh_->size();
  MeshFunction out(mesh_, 1);
  out.log_scale = f.log_scale;
  SeriesInfo local;
  SeriesInfo& inf = info ? *info : local;
  inf = {};
  double fnorm = 0.0;
  for (cplx v : f.d[0]) fnorm = std::max(fnorm, std::abs(v));
  if (fnorm == 0.0) {
    inf.converged = true;
    complete(out, f, alpha);
    return out;
  }
  CVec src = f.d[0], v, dv;
  double a2 = alpha * alpha;
  double ref = fnorm;
  for (int j = 0; j < 40; ++j) {
    convolve0(src, v, dv);
    double tn = 0.0;
    for (size_t i = 0; i < n; ++i) {
      out.d[0][i] += v[i];
      out.d[1][i] += dv[i];
      tn = std::max(tn, std::abs(v[i]));
    }
    inf.term_norms.push_back(tn);
    if (j == 0) ref = std::min(fnorm, tn > 0.0 ? tn : fnorm);
    if (a2 == 0.0 || tn < tol * ref) {
      inf.converged = true;
      break;
    }
    size_t m = inf.term_norms.size();
    if (m >= 4 && inf.term_norms[m - 1] >= inf.term_norms[m - 2] &&
        inf.term_norms[m - 2] >= inf.term_norms[m - 3] && inf.term_norms[m - 3] >= inf.term_norms[m - 4])
      throw Error(ErrorCode::SeriesDiverging, "Rayleigh series in alpha^2 is not decaying");
    for (size_t i = 0; i < n; ++i) src[i] = a2 * (u_[0][i] - c_) * v[i];
  }
  complete(out, f, alpha);
  return out;
}

MeshFunction RayleighLayer::phi_j_alpha(int j, double alpha, double tol, double max_alpha,
                                        SeriesInfo* info) const {
  if (j != 1 && j != 2) throw Error(ErrorCode::InvalidArgument, "phi_j_alpha needs j in {1,2}");
  if (alpha > max_alpha) throw Error(ErrorCode::InvalidArgument, "alpha above the supported range");
  size_t n = mesh_->size();
  const MeshFunction& seed = j == 1 ? phi10_ : phi20_;
  MeshFunction sum = seed, term = seed;
  SeriesInfo local;
  SeriesInfo& inf = info ? *info : local;
  inf = {};
  double a2 = alpha * alpha;
  double ref = seed.sup(0);
  inf.term_norms.push_back(ref);
  if (a2 == 0.0) {
    inf.converged = true;
    return sum;
  }
  double w = 1.0;
  for (int it = 1; it < 40; ++it) {
    MeshFunction g(mesh_, 2);
    for (size_t i = 0; i < n; ++i) {
      cplx uc = u_[0][i] - c_;
      g.d[0][i] = uc * term.d[0][i];
      g.d[1][i] = u_[1][i] * term.d[0][i] + uc * term.d[1][i];
      g.d[2][i] = u_[2][i] * term.d[0][i] + 2.0 * u_[1][i] * term.d[1][i] + uc * term.d[2][i];
    }
    term = solve0(g);
    w *= a2;
    double tn = w * term.sup(0);
    inf.term_norms.push_back(tn);
    for (int k = 0; k <= 4; ++k)
      for (size_t i = 0; i < n; ++i) sum.d[k][i] += w * term.d[k][i];
    if (tn < tol * ref) {
      inf.converged = true;
      break;
    }
    size_t m = inf.term_norms.size();
    if (m >= 4 && inf.term_norms[m - 1] >= inf.term_norms[m - 2] &&
        inf.term_norms[m - 2] >= inf.term_norms[m - 3] && inf.term_norms[m - 3] >= inf.term_norms[m - 4])
      throw Error(ErrorCode::SeriesDiverging, "phi_{j,alpha} series is not decaying");
  }
  return sum;
}

CVec RayleighLayer::apply(const MeshFunction& phi, double alpha) const {
  size_t n = mesh_->size();
  CVec d2 = mesh_->derivative(phi.d[1]);
  CVec out(n);
  double a2 = alpha * alpha;
  for (size_t i = 0; i < n; ++i)
    out[i] = ((u_[0][i] - c_) * (d2[i] - a2 * phi.d[0][i]) - u_[2][i] * phi.d[0][i]);
  return out;
}

NormReport norm_report(const MeshFunction& f, cplx z_c, int p_max) {
  NormReport rep;
  p_max = std::min(p_max, f.order());
  rep.p_max = p_max;
  const auto& z = f.mesh->nodes();
  double s = std::exp(f.log_scale);
  for (size_t i = 0; i < f.size(); ++i) {
    cplx dz = z[i] - z_c;
    double adz = std::abs(dz);
    double xs = 0.0;
    cplx w = 1.0;
    for (int k = 0; k <= std::min(p_max, 2); ++k) {
      xs += std::abs(w * f.d[k][i]) * s;
      rep.x[k] = std::max(rep.x[k], xs);
      w *= dz;
    }
    double y = std::abs(f.d[0][i]) * s;
    rep.y[0] = std::max(rep.y[0], y);
    for (int l = 1; l <= std::min(p_max, 4); ++l) {
      double weight = l == 1 ? 1.0 + std::abs(std::log(dz)) : 1.0 + std::pow(adz, 1.0 - l);
      y = std::max(y, std::abs(f.d[l][i]) * s / weight);
      rep.y[l] = std::max(rep.y[l], y);
    }
  }
  for (int k = p_max + 1; k <= 2; ++k) rep.x[k] = rep.x[p_max];
  for (int k = p_max + 1; k <= 4; ++k) rep.y[k] = rep.y[p_max];
  return rep;
}

}  // namespace osm
