#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "osmodes/profiles.hpp"

namespace osm {

struct CollocationProblem {
  int N = 0;
  double alpha = 0.0, R = 0.0;
  Eigen::VectorXd z;                 // extrema grid on [0,1], z(0) = 1
  Eigen::MatrixXd D1, D2, D3, D4;    // d/dz matrices
  // A x = c B x for x = (phi, psi), psi = (d^2 - alpha^2) phi, with bordered boundary rows.
  Eigen::MatrixXcd A, B;
  double cond_estimate = 0.0;        // condition of the interior block of d^2 - alpha^2
};

// Chebyshev extrema grid mapped to [0,1] with its first-derivative matrix.
void chebyshev_grid(int N, Eigen::VectorXd& z, Eigen::MatrixXd& D1);

CollocationProblem assemble(const ShearProfile& p, double alpha, double R, int N);

struct Spectrum {
  std::vector<cplx> c;                 // finite eigenvalues
  std::vector<Eigen::VectorXcd> phi;   // matching eigenvectors, phi part only
};
Spectrum solve_spectrum(const CollocationProblem& prob, bool vectors = false);

struct LeadingMode {
  cplx c = 0.0;
  double pair_distance = 0.0;          // |c_N - c_{N+dN}|
  bool self_converged = false;         // pair_distance <= 1e-6
  Eigen::VectorXcd phi;                // eigenvector at the lower resolution
};

// Largest-Im c eigenvalue confirmed at N and N + dN (pairing tolerance 1e-4).
// With unstable_only, returns nothing when every confirmed Im c is negative.
std::optional<LeadingMode> leading_mode(const ShearProfile& p, double alpha, double R, int N = 120,
                                        int dN = 40, bool unstable_only = false);
std::optional<LeadingMode> leading_unstable(const ShearProfile& p, double alpha, double R, int N = 120,
                                            int dN = 40);

// Confirmed eigenvalue nearest to target.
std::optional<LeadingMode> nearest_mode(const ShearProfile& p, double alpha, double R, cplx target,
                                        int N = 120, int dN = 40);

}  // namespace osm
