#pragma once

#include <array>
#include <memory>
#include <string>

#include "osmodes/critical_layer.hpp"

namespace osm {

enum class LinearSolver { Neumann, Gmres, Auto };

struct NumericsOptions {
  double series_tol = 1e-12;   // Rayleigh and Neumann series truncation
  double iter_tol = 1e-11;     // relative residual target for the Iter engine
  int max_iter = 80;
  LinearSolver solver = LinearSolver::Auto;
  double max_alpha = 2.0;      // largest alpha for the Rayleigh alpha-series
  ContourMesh::Options mesh;
};

// All layers for one (profile, alpha, R, c).
class OrrContext {
 public:
  OrrContext(const ShearProfile& profile, double alpha, double R, cplx c,
             const NumericsOptions& opt = {}, cplx zc_guess = 0.0);
  OrrContext(const OrrContext&) = delete;
  OrrContext& operator=(const OrrContext&) = delete;

  const ShearProfile& profile() const { return profile_; }
  double alpha() const { return alpha_; }
  double reynolds() const { return R_; }
  cplx c() const { return c_; }
  cplx eps() const { return crit_->eps(); }
  cplx delta() const { return crit_->delta(); }
  const CriticalPoint& critical_point() const { return cp_; }
  const std::shared_ptr<const ContourMesh>& mesh() const { return mesh_; }
  const RayleighLayer& rayleigh() const { return *ray_; }
  const CriticalLayer& critical() const { return *crit_; }
  const NumericsOptions& options() const { return opt_; }

  // Reg(f) = -(eps alpha^4 + U'' + alpha^2 (U - c)) f, orders up to min(2, f.order()).
  MeshFunction reg(const MeshFunction& f) const;
  // Diff(f) = -eps (d^2 - alpha^2)^2 f, value only.
  MeshFunction diff(const MeshFunction& f) const;
  // Iter(f) = AiryErr(Diff(RS f)) - Reg(AirySolver(Diff(RS f))), orders 0..2.
  MeshFunction iter(const MeshFunction& f) const;
  // Correction T(f) = psi + AirySolver(Diff psi), psi = -RS(f); orders 0..4.
  MeshFunction correction(const MeshFunction& f) const;

  // Orr(phi) in mantissa units, with phi'' and phi'''' from spectral derivatives of
  // the stored odd orders.
  CVec orr_residual(const MeshFunction& phi) const;
  // The same operator as Ray_alpha + Diff and as -Airy + Reg.
  std::pair<CVec, CVec> orr_two_ways(const MeshFunction& phi) const;

 private:
  ShearProfile profile_;
  double alpha_, R_;
  cplx c_;
  NumericsOptions opt_;
  CriticalPoint cp_;
  std::shared_ptr<const ContourMesh> mesh_;
  std::unique_ptr<RayleighLayer> ray_;
  std::unique_ptr<CriticalLayer> crit_;
};

struct OrrModeSet {
  std::array<MeshFunction, 4> phi;
  std::array<std::vector<double>, 4> iter_history;
  std::array<std::string, 4> solver_used;
  cplx K1 = 0.0, K2 = 0.0, K3 = 0.0, K4 = 0.0;
  // Boundary traces, orders 0..3; phi4 traces divided by exp(log_scale).
  std::array<std::array<cplx, 4>, 4> at0{}, at1{};
  std::array<double, 4> log_scale{};
};

// Sum of the Iter corrections that cancel the residual i0; returns orders 0..4.
MeshFunction iterate_corrections(const OrrContext& ctx, const MeshFunction& i0, double tol,
                                 std::vector<double>* history, std::string* solver_used);

std::pair<MeshFunction, MeshFunction> build_slow_modes(const OrrContext& ctx,
                                                       std::array<std::vector<double>, 2>* hist = nullptr);
std::pair<MeshFunction, MeshFunction> build_fast_modes(const OrrContext& ctx,
                                                       std::array<std::vector<double>, 2>* hist = nullptr);
// The unperturbed fast seeds phi_{3,0}, phi_{4,0} with derivatives 0..4.
MeshFunction fast_seed(const OrrContext& ctx, int j);
OrrModeSet build_modes(const OrrContext& ctx);
void compute_ratios(OrrModeSet& modes);

// Operator-norm estimate of Iter on a fixed probe family (X_2 norms).
struct ContractionReport {
  double kappa = 0.0;
  std::vector<double> ratios;
};
ContractionReport measure_contraction(const OrrContext& ctx);

// Mantissas of phi and phi' at a point off the mesh by Taylor-stepping the
// Orr-Sommerfeld equation from the nearest node.
std::array<cplx, 2> continue_mode(const OrrContext& ctx, const MeshFunction& phi, cplx target);

}  // namespace osm
