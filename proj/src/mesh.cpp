#include "osmodes/mesh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "osmodes/errors.hpp"

namespace osm {

namespace {

constexpr int P = ContourMesh::P;

struct Reference {
  std::vector<double> tau, S, D;
  Reference() {
    const double pi = std::numbers::pi;
    tau.resize(P);
    for (int j = 0; j < P; ++j) tau[j] = -std::cos(pi * j / (P - 1));
    Eigen::MatrixXd V(P, P), IT(P, P), DT(P, P);
    for (int j = 0; j < P; ++j) {
      double x = tau[j];
      double th = std::acos(std::clamp(x, -1.0, 1.0));
      auto T = [&](int n) { return std::cos(n * th); };
      auto Tm1 = [](int n) { return (n % 2) ? -1.0 : 1.0; };
      for (int n = 0; n < P; ++n) {
        V(j, n) = T(n);
        if (n == 0) IT(j, n) = x + 1.0;
        else if (n == 1) IT(j, n) = (x * x - 1.0) / 2.0;
        else
          IT(j, n) = 0.5 * ((T(n + 1) - Tm1(n + 1)) / (n + 1) - (T(n - 1) - Tm1(n - 1)) / (n - 1));
        if (j == 0) DT(j, n) = (n % 2 ? 1.0 : -1.0) * n * n;
        else if (j == P - 1) DT(j, n) = double(n) * n;
        else DT(j, n) = n * std::sin(n * th) / std::sin(th);
      }
    }
    Eigen::MatrixXd Vi = V.inverse();
    Eigen::MatrixXd Sm = IT * Vi, Dm = DT * Vi;
    S.resize(P * P);
    D.resize(P * P);
    for (int i = 0; i < P; ++i)
      for (int k = 0; k < P; ++k) {
        S[i * P + k] = Sm(i, k);
        D[i * P + k] = Dm(i, k);
      }
  }
};

const Reference& ref() {
  static const Reference r;
  return r;
}

double segment_distance(cplx p, cplx a, cplx b) {
  cplx ab = b - a;
  double L2 = std::norm(ab);
  if (L2 == 0.0) return std::abs(p - a);
  double t = std::clamp(((p - a) * std::conj(ab)).real() / L2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

const std::vector<double>& ContourMesh::integration_matrix() { return ref().S; }
const std::vector<double>& ContourMesh::differentiation_matrix() { return ref().D; }
const std::vector<double>& ContourMesh::reference_nodes() { return ref().tau; }

ContourMesh::ContourMesh(cplx z_c, double delta_abs, const Options& opt)
    : z_c_(z_c), delta_abs_(delta_abs) {
  double d = delta_abs > 0.0 ? opt.dip_factor * delta_abs : opt.rayleigh_dip;
  double xc = z_c.real(), yc = z_c.imag();
  vertices_.push_back(0.0);
  bool dip = yc < d && xc + d > 0.0 && xc - d < 1.0;
  if (dip) {
    // Ramps of slope 1/2 keep arg(z - z_c) within pi/6 of the real axis on both sides.
    double yh = yc - d, depth = -yh, w = d;
    double xl = std::max(xc - w, 0.0), xl0 = std::max(xc - w - 2.0 * depth, 0.0);
    double xr = std::min(xc + w, 1.0), xr0 = std::min(xc + w + 2.0 * depth, 1.0);
    for (cplx v : {cplx(xl0, 0.0), cplx(xl, yh), cplx(xr, yh), cplx(xr0, 0.0)})
      if (std::abs(v - vertices_.back()) > 1e-15) vertices_.push_back(v);
  }
  if (std::abs(vertices_.back() - 1.0) > 1e-15) vertices_.push_back(1.0);
  for (size_t k = 0; k + 1 < vertices_.size(); ++k) add_segment(vertices_[k], vertices_[k + 1], opt);

  const auto& tau = ref().tau;
  double s0 = 0.0;
  z_.reserve(jac_.size() * P);
  std::vector<cplx> starts;
  // jac_ holds panel endpoints temporarily as (a, b) pairs.
  std::vector<cplx> ends = std::move(jac_);
  jac_.clear();
  for (size_t k = 0; k < ends.size(); k += 2) {
    cplx a = ends[k], b = ends[k + 1];
    cplx h = (b - a) / 2.0;
    for (int j = 0; j < P; ++j) {
      z_.push_back(a + (tau[j] + 1.0) * h);
      t_.push_back(s0 + (tau[j] + 1.0) * std::abs(h));
    }
    s0 += std::abs(b - a);
    jac_.push_back(h);
  }
  z_.front() = 0.0;
  z_.back() = 1.0;
}

void ContourMesh::add_segment(cplx a, cplx b, const Options& opt) {
  double len = std::abs(b - a);
  double dmin = segment_distance(z_c_, a, b);
  double dmax = std::max(std::abs(a - z_c_), std::abs(b - z_c_));
  double h = std::min(opt.h_max, opt.rayleigh_ratio * dmin);
  if (delta_abs_ > 0.0)
    h = std::min(h, opt.airy_factor * delta_abs_ / std::sqrt(std::max(1.0, dmax / delta_abs_)));
  h *= opt.refine;
  if (len > h && len > 2.0 * opt.min_panel) {
    cplx m = 0.5 * (a + b);
    add_segment(a, m, opt);
    add_segment(m, b, opt);
    return;
  }
  if (len < opt.min_panel && dmin < 1e-12)
    throw Error(ErrorCode::QuadratureFailure, "contour passes through the critical point");
  jac_.push_back(a);
  jac_.push_back(b);
}

double ContourMesh::min_distance_to_zc() const {
  double m = INFINITY;
  for (cplx z : z_) m = std::min(m, std::abs(z - z_c_));
  return m;
}

cplx ContourMesh::integral(const CVec& f) const {
  const auto& S = ref().S;
  cplx total = 0.0;
  for (int k = 0; k < panels(); ++k) {
    cplx s = 0.0;
    for (int j = 0; j < P; ++j) s += S[(P - 1) * P + j] * f[k * P + j];
    total += s * jac_[k];
  }
  return total;
}

CVec ContourMesh::cumulative(const CVec& f) const {
  const auto& S = ref().S;
  CVec out(size());
  cplx base = 0.0;
  for (int k = 0; k < panels(); ++k) {
    const cplx* fk = &f[k * P];
    for (int i = 0; i < P; ++i) {
      cplx s = 0.0;
      for (int j = 0; j < P; ++j) s += S[i * P + j] * fk[j];
      out[k * P + i] = base + jac_[k] * s;
    }
    base = out[k * P + P - 1];
  }
  return out;
}

CVec ContourMesh::cumulative_back(const CVec& f) const {
  CVec fw = cumulative(f);
  cplx total = fw.back();
  for (auto& v : fw) v = total - v;
  return fw;
}

CVec ContourMesh::scaled_forward(const CVec& f, const CVec& s) const {
  const auto& S = ref().S;
  CVec out(size());
  cplx prev = 0.0;
  std::array<cplx, P> g;
  for (int k = 0; k < panels(); ++k) {
    size_t o = size_t(k) * P;
    cplx sa = s[o];
    for (int j = 0; j < P; ++j) g[j] = f[o + j] * std::exp(s[o + j] - sa);
    for (int i = 0; i < P; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < P; ++j) acc += S[i * P + j] * g[j];
      out[o + i] = std::exp(sa - s[o + i]) * (prev + jac_[k] * acc);
    }
    prev = out[o + P - 1];
  }
  return out;
}

CVec ContourMesh::scaled_backward(const CVec& f, const CVec& s) const {
  const auto& S = ref().S;
  CVec out(size());
  cplx next = 0.0;
  std::array<cplx, P> g, cum;
  for (int k = panels() - 1; k >= 0; --k) {
    size_t o = size_t(k) * P;
    cplx sb = s[o + P - 1];
    for (int j = 0; j < P; ++j) g[j] = f[o + j] * std::exp(s[o + j] - sb);
    for (int i = 0; i < P; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < P; ++j) acc += S[i * P + j] * g[j];
      cum[i] = acc;
    }
    for (int i = 0; i < P; ++i)
      out[o + i] = std::exp(sb - s[o + i]) * (next + jac_[k] * (cum[P - 1] - cum[i]));
    next = out[o];
  }
  return out;
}

CVec ContourMesh::derivative(const CVec& f) const {
  const auto& D = ref().D;
  CVec out(size());
  for (int k = 0; k < panels(); ++k) {
    size_t o = size_t(k) * P;
    for (int i = 0; i < P; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < P; ++j) acc += D[i * P + j] * f[o + j];
      out[o + i] = acc / jac_[k];
    }
  }
  return out;
}

size_t ContourMesh::nearest(cplx z) const {
  size_t best = 0;
  double bd = INFINITY;
  for (size_t i = 0; i < z_.size(); ++i) {
    double d = std::abs(z_[i] - z);
    if (d < bd) bd = d, best = i;
  }
  return best;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = t;
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

double MeshFunction::sup(int k) const {
  double m = 0.0;
  for (cplx v : d[k]) m = std::max(m, std::abs(v));
  return m;
}

cplx MeshFunction::at(int k, size_t i) const { return d[k][i] * std::exp(log_scale); }

MeshFunction combine(const MeshFunction& a, cplx s, const MeshFunction& b) {
  MeshFunction r = a;
  int n = std::min(a.order(), b.order());
  r.d.resize(n + 1);
  cplx f = s * std::exp(b.log_scale - a.log_scale);
  for (int k = 0; k <= n; ++k)
    for (size_t i = 0; i < r.d[k].size(); ++i) r.d[k][i] += f * b.d[k][i];
  return r;
}

MeshFunction scaled(const MeshFunction& a, cplx s) {
  MeshFunction r = a;
  for (auto& v : r.d)
    for (auto& x : v) x *= s;
  return r;
}

}  // namespace osm
