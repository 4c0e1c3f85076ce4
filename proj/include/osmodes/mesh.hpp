#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace osm {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

// Polygonal contour from 0 to 1 that dips below z_c, split into panels carrying
// Chebyshev-Lobatto nodes. Interface nodes are duplicated, so panel k owns
// nodes k*P .. k*P+P-1.
class ContourMesh {
 public:
  static constexpr int P = 16;

  struct Options {
    double h_max = 0.125;
    double airy_factor = 4.0;      // panel length vs |delta| / sqrt|X|
    double rayleigh_ratio = 0.5;   // panel length vs distance to z_c
    double dip_factor = 2.0;       // distance kept from z_c, in units of |delta|
    double rayleigh_dip = 0.02;    // distance kept from z_c when no delta is given
    double min_panel = 1e-9;
    double refine = 1.0;           // uniform shrink factor for panel lengths
  };

  ContourMesh(cplx z_c, double delta_abs, const Options& opt);
  ContourMesh(cplx z_c, double delta_abs) : ContourMesh(z_c, delta_abs, Options{}) {}

  size_t size() const { return z_.size(); }
  int panels() const { return int(z_.size() / P); }
  const CVec& nodes() const { return z_; }
  cplx node(size_t i) const { return z_[i]; }
  // Arclength along the contour.
  const std::vector<double>& param() const { return t_; }
  cplx jacobian(int panel) const { return jac_[panel]; }
  const std::vector<cplx>& vertices() const { return vertices_; }
  cplx z_c() const { return z_c_; }
  double delta_abs() const { return delta_abs_; }
  double min_distance_to_zc() const;

  cplx integral(const CVec& f) const;
  // F(z_i) = int_0^{z_i} f.
  CVec cumulative(const CVec& f) const;
  // B(z_i) = int_{z_i}^1 f.
  CVec cumulative_back(const CVec& f) const;
  // int_0^{z_i} f(y) exp(s(y) - s(z_i)) dy.
  CVec scaled_forward(const CVec& f, const CVec& s) const;
  // int_{z_i}^1 f(y) exp(s(y) - s(z_i)) dy.
  CVec scaled_backward(const CVec& f, const CVec& s) const;
  // Panelwise spectral derivative.
  CVec derivative(const CVec& f) const;
  // Index of the node closest to z.
  size_t nearest(cplx z) const;

  // Reference matrices on [-1,1] (row-major P x P).
  static const std::vector<double>& integration_matrix();
  static const std::vector<double>& differentiation_matrix();
  static const std::vector<double>& reference_nodes();

 private:
  void add_segment(cplx a, cplx b, const Options& opt);

  cplx z_c_;
  double delta_abs_;
  CVec z_;
  std::vector<double> t_;
  CVec jac_;
  CVec vertices_;
};

// Samples of a function and its derivatives on the mesh; stored values are
// multiplied by exp(log_scale) to give true values.
struct MeshFunction {
  std::shared_ptr<const ContourMesh> mesh;
  std::vector<CVec> d;
  double log_scale = 0.0;

  MeshFunction() = default;
  MeshFunction(std::shared_ptr<const ContourMesh> m, int order)
      : mesh(std::move(m)), d(order + 1, CVec(mesh->size(), 0.0)) {}
  int order() const { return int(d.size()) - 1; }
  size_t size() const { return d.empty() ? 0 : d[0].size(); }
  // Largest stored mantissa of order k; the log_scale factor is not applied.
  double sup(int k = 0) const;
  cplx at(int k, size_t i) const;
};

// Gauss-Legendre rule on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// a + s*b over common orders; both must share log_scale.
MeshFunction combine(const MeshFunction& a, cplx s, const MeshFunction& b);
MeshFunction scaled(const MeshFunction& a, cplx s);

}  // namespace osm
