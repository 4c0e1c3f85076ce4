#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "osmodes/orr_modes.hpp"

namespace osm {

struct DispersionOptions {
  NumericsOptions numerics;
  bool reduced = false;       // root-find the reduced relation instead of the determinant
  double tol_dc = 1e-10;
  double tol_residual = 1e-8;
  int max_iter = 40;
  double max_wander = 0.3;    // largest allowed |c - U(0)|
};

struct DispersionResult {
  double alpha = 0.0, R = 0.0;
  cplx c = 0.0;
  double im_c = 0.0;
  double growth_rate = 0.0;
  double residual = 0.0;
  double beta = 0.0, A = 0.0;
  int iterations = 0;
  std::vector<cplx> history;
  OrrModeSet modes;
};

// Boundary determinant (rows phi, phi' at 0 and phi', phi''' at 1) with the phi_4
// column divided by phi_4'''(1).
cplx dispersion_det(const OrrModeSet& modes);
// |det| over the product of column norms.
double dispersion_det_relative(const OrrModeSet& modes);
// K3 - K1 + K2 / U'(0)^2.
cplx reduced_dispersion(const OrrModeSet& modes, double wall_slope);

cplx dispersion_det(const ShearProfile& p, double alpha, double R, cplx c, const NumericsOptions& opt = {});
cplx reduced_dispersion(const ShearProfile& p, double alpha, double R, cplx c, const NumericsOptions& opt = {});

// U(0) + i|delta|/2.
cplx rayleigh_seed(const ShearProfile& p, double alpha, double R);
// Leading-order relation delta C_Ai(-z_c/delta) - K1 with the small-alpha Rayleigh K1.
cplx model_dispersion(const ShearProfile& p, double alpha, double R, cplx c);
// Root of model_dispersion started from rayleigh_seed; falls back to rayleigh_seed.
cplx default_seed(const ShearProfile& p, double alpha, double R);

DispersionResult solve_eigenvalue(const ShearProfile& p, double alpha, double R,
                                  std::optional<cplx> c_init = std::nullopt,
                                  const DispersionOptions& opt = {});

struct BranchPoint {
  double A = 0.0, alpha = 0.0;
  bool converged = false;
  cplx c = 0.0;
  double residual = 0.0;
  std::string error;
};

struct BranchScan {
  double R = 0.0, beta = 0.0;
  std::vector<BranchPoint> points;
  std::vector<double> crossings;     // A values where Im c changes sign
  std::vector<cplx> crossing_c;
  std::string status;                // "ok" or the reason a crossing is missing
};

// Sweep alpha = A R^-beta over A_values in order, seeding each point from its predecessor;
// sign changes of Im c are bisected to rel_tol in A.
BranchScan scan_branch(const ShearProfile& p, double R, double beta, const std::vector<double>& A_values,
                       double rel_tol = 1e-3, const DispersionOptions& opt = {});
BranchScan scan_lower_branch(const ShearProfile& p, double R, const std::vector<double>& A_values,
                             double rel_tol = 1e-3, const DispersionOptions& opt = {});
BranchScan scan_upper_branch(const ShearProfile& p, double R, const std::vector<double>& A_values,
                             double rel_tol = 1e-3, const DispersionOptions& opt = {});

struct GrowthRow {
  double beta = 0.0, R = 0.0, alpha = 0.0;
  bool converged = false;
  cplx c = 0.0;
  double growth_rate = 0.0;
  std::string error;
};

struct GrowthFit {
  double beta = 0.0;
  double slope_im_c = 0.0, slope_growth = 0.0;
  bool valid = false;
};

// alpha = A R^-beta for every (beta, R); jobs run on `workers` threads.
std::vector<GrowthRow> scan_growth_rates(const ShearProfile& p, const std::vector<double>& betas,
                                         const std::vector<double>& Rs, double A = 1.0, int workers = 1,
                                         const DispersionOptions& opt = {});
std::vector<GrowthFit> fit_growth_slopes(const std::vector<GrowthRow>& rows);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn);

}  // namespace osm
