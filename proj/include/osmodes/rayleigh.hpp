#pragma once

#include <array>
#include <memory>

#include "osmodes/mesh.hpp"
#include "osmodes/profiles.hpp"

namespace osm {

struct SeriesInfo {
  std::vector<double> term_norms;
  bool converged = false;
};

struct NormReport {
  std::array<double, 3> x{};  // X_0..X_2
  std::array<double, 5> y{};  // Y_0..Y_4
  int p_max = 0;
};

// Inviscid layer for a fixed wave speed c on a contour mesh.
class RayleighLayer {
 public:
  RayleighLayer(const ShearProfile& profile, cplx c, cplx z_c,
                std::shared_ptr<const ContourMesh> mesh);

  const ShearProfile& profile() const { return profile_; }
  cplx c() const { return c_; }
  cplx z_c() const { return z_c_; }
  const std::shared_ptr<const ContourMesh>& mesh() const { return mesh_; }
  // U and its derivatives at the nodes.
  const std::array<CVec, 5>& u() const { return u_; }
  // 1/(U-c) and its first two derivatives.
  const std::array<CVec, 3>& r() const { return r_; }

  const MeshFunction& phi10() const { return phi10_; }
  const MeshFunction& phi20() const { return phi20_; }
  cplx phi20_at(cplx z) const;
  cplx phi10_at(cplx z) const { return profile_.value(z) - c_; }
  // Green function of Ray_0 as a function of the source point x.
  cplx green0(cplx x, cplx z) const;

  // Ray_0(phi) = f with phi'(1) = 0. Output orders 0..min(4, 2 + f.order()).
  MeshFunction solve0(const MeshFunction& f) const;
  // Ray_alpha(phi) = f via the series in alpha^2.
  MeshFunction solve_alpha(const MeshFunction& f, double alpha, double tol = 1e-10,
                           SeriesInfo* info = nullptr) const;
  // phi_{j,alpha} = sum alpha^(2n) phi_{j,n}, orders 0..4.
  MeshFunction phi_j_alpha(int j, double alpha, double tol = 1e-10, double max_alpha = 0.3,
                           SeriesInfo* info = nullptr) const;

  // Ray_alpha(phi) in mantissa units, using a spectral derivative of the stored phi' for phi''.
  CVec apply(const MeshFunction& phi, double alpha) const;

 private:
  // Values and first derivative of -(phi10 A + phi20 B).
  void convolve0(const CVec& f, CVec& v, CVec& dv) const;
  // Orders 2..4 from Ray_alpha(phi) = f given phi, phi'.
  void complete(MeshFunction& phi, const MeshFunction& f, double alpha) const;

  ShearProfile profile_;
  cplx c_, z_c_;
  std::shared_ptr<const ContourMesh> mesh_;
  std::array<CVec, 5> u_;
  std::array<CVec, 3> r_;
  CVec integral_r2_;  // int_{1/2}^z dy/(U-c)^2
  MeshFunction phi10_, phi20_;
};

NormReport norm_report(const MeshFunction& f, cplx z_c, int p_max);

}  // namespace osm
