#pragma once

#include "osmodes/airy.hpp"
#include "osmodes/rayleigh.hpp"

namespace osm {

enum class GreenPart { Localized, NonLocalized, Full };
// Which side of the diagonal a kernel branch belongs to.
enum class GreenBranch { Above, Below };  // x > z, x < z

// Langer map and modified Airy Green function on a contour mesh.
class CriticalLayer {
 public:
  CriticalLayer(const RayleighLayer& ray, double alpha, double R);

  const RayleighLayer& rayleigh() const { return ray_; }
  const std::shared_ptr<const ContourMesh>& mesh() const { return ray_.mesh(); }
  double alpha() const { return alpha_; }
  double reynolds() const { return R_; }
  cplx eps() const { return eps_; }
  cplx delta() const { return delta_; }
  cplx z_c() const { return ray_.z_c(); }
  cplx slope_c() const { return uc1_; }

  // Langer data at the nodes.
  const CVec& eta() const { return eta_; }
  const CVec& X() const { return X_; }
  const CVec& zeta() const { return zeta_; }
  const CVec& zdot() const { return zdot_; }
  const std::array<CVec, 5>& w() const { return w_; }  // zdot^(1/2) and derivatives
  const std::array<CVec, 3>& m() const { return m_; }  // AiryErr multiplier and derivatives
  const CVec& eta2() const { return eta2_; }
  // eta and its derivatives up to order 6.
  const std::array<CVec, 7>& eta_derivs() const { return etad_; }
  // eta at an arbitrary point, direct quadrature.
  cplx eta_at(cplx z) const;

  // Airy family mantissas: Ai-type relative to exp(-zeta), Ci-type to exp(+zeta).
  const std::array<CVec, 4>& ai() const { return ai_; }  // Ai, Ai', Ai(1), Ai(2) at X
  const std::array<CVec, 4>& ci() const { return ci_; }
  // Weighted primitives, orders 1 and 2, same scaling.
  const std::array<CVec, 2>& ai_tilde() const { return at_; }
  const std::array<CVec, 2>& ci_tilde() const { return ct_; }
  // True value of a weighted primitive at node i.
  cplx weighted_primitive(AiryKind kind, int order, size_t i) const;

  // d^k/dz^k G(x_i, z_j) for the requested branch formula and part, k = 0..3.
  cplx green_branch(size_t ix, size_t iz, GreenBranch b, GreenPart part, int k) const;
  cplx green(size_t ix, size_t iz, GreenPart part, int k = 0) const;

  // Airy(S g) = g + AiryErr(g). Output orders 0..4, same log scale as g.
  MeshFunction solve(const MeshFunction& g) const;
  // AiryErr(g), orders 0..2. Pass a precomputed solve(g) to avoid recomputation.
  MeshFunction err(const MeshFunction& g, const MeshFunction* solved = nullptr) const;
  MeshFunction err_from_solution(const MeshFunction& solved) const;
  // Exact inverse of Airy via the Neumann series.
  MeshFunction solve_inf(const MeshFunction& g, double tol = 1e-10, SeriesInfo* info = nullptr) const;
  // solve(eps f'''') for f with f'(1) = 0.
  MeshFunction solve_singular(const MeshFunction& f) const;

  // Airy(phi) in mantissa units, with phi'' and phi'''' from spectral derivatives of stored odd orders.
  CVec apply_airy(const MeshFunction& phi) const;

 private:
  void build_langer();
  void build_airy();

  const RayleighLayer& ray_;
  double alpha_, R_;
  cplx eps_, delta_, uc1_;
  CVec eta_, X_, zeta_, zdot_, eta2_;
  std::array<CVec, 5> w_;
  std::array<CVec, 7> etad_;
  std::array<CVec, 3> m_;
  std::array<CVec, 4> ai_, ci_;
  std::array<CVec, 2> at_, ct_;
  std::vector<double> gl_x_, gl_w_;
  std::vector<cplx> taylor_c_;
};

}  // namespace osm
