#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace osm {

using cplx = std::complex<double>;

// Analytic velocity profile. Either U(z) = sum a_i z^i or U(z) = a sin(k z).
class ShearProfile {
 public:
  static ShearProfile polynomial(std::string name, std::vector<double> coeffs,
                                 double domain_radius = 0.5);
  static ShearProfile sine(std::string name, double amplitude, double k,
                           double domain_radius = 0.5);

  // U, U', U'', U''', U''''.
  std::array<cplx, 5> eval(cplx z) const;
  cplx value(cplx z) const { return eval(z)[0]; }
  // Taylor coefficients of U about z0, orders 0..n-1.
  void taylor(cplx z0, int n, cplx* out) const;

  const std::string& name() const { return name_; }
  double domain_radius() const { return domain_radius_; }
  double wall_value() const { return eval(0.0)[0].real(); }
  double wall_slope() const { return eval(0.0)[1].real(); }
  // Distance from z to the segment [0,1].
  static double distance_to_interval(cplx z);

 private:
  enum class Kind { Polynomial, Sine };
  Kind kind_ = Kind::Polynomial;
  std::string name_;
  std::vector<double> coeffs_;
  double amplitude_ = 0.0, k_ = 0.0;
  double domain_radius_ = 0.5;
};

ShearProfile make_poiseuille();
ShearProfile make_sin_profile();
ShearProfile make_couette();
ShearProfile make_polynomial_profile(const std::vector<double>& coeffs);
// "poiseuille", "sin", "couette" or "poly: [a0, a1, ...]".
ShearProfile profile_from_spec(const std::string& spec);

struct CriticalPoint {
  cplx c;
  cplx z_c;
  double residual = 0.0;
  int iterations = 0;
};

CriticalPoint find_critical_point(const ShearProfile& profile, cplx c, cplx guess);

}  // namespace osm
