#include "osmodes/profiles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "osmodes/errors.hpp"

namespace osm {

ShearProfile ShearProfile::polynomial(std::string name, std::vector<double> coeffs,
                                      double domain_radius) {
  ShearProfile p;
  p.kind_ = Kind::Polynomial;
  p.name_ = std::move(name);
  if (coeffs.empty()) coeffs.push_back(0.0);
  p.coeffs_ = std::move(coeffs);
  p.domain_radius_ = domain_radius;
  return p;
}

ShearProfile ShearProfile::sine(std::string name, double amplitude, double k,
                                double domain_radius) {
  ShearProfile p;
  p.kind_ = Kind::Sine;
  p.name_ = std::move(name);
  p.amplitude_ = amplitude;
  p.k_ = k;
  p.domain_radius_ = domain_radius;
  return p;
}

void ShearProfile::taylor(cplx z0, int n, cplx* out) const {
  if (kind_ == Kind::Polynomial) {
    // Repeated synthetic division gives the shifted coefficients.
    std::vector<cplx> a(coeffs_.begin(), coeffs_.end());
    int deg = int(a.size()) - 1;
    for (int k = 0; k < n; ++k) {
      if (k > deg) {
        out[k] = 0.0;
        continue;
      }
      for (int i = deg - 1; i >= k; --i) a[i] += z0 * a[i + 1];
      out[k] = a[k];
    }
    return;
  }
  cplx s = std::sin(k_ * z0), c = std::cos(k_ * z0);
  double f = amplitude_;
  for (int m = 0; m < n; ++m) {
    if (m > 0) f *= k_ / m;
    cplx d;
    switch (m % 4) {
      case 0: d = s; break;
      case 1: d = c; break;
      case 2: d = -s; break;
      default: d = -c; break;
    }
    out[m] = f * d;
  }
}

std::array<cplx, 5> ShearProfile::eval(cplx z) const {
  std::array<cplx, 5> t;
  taylor(z, 5, t.data());
  t[2] *= 2.0;
  t[3] *= 6.0;
  t[4] *= 24.0;
  return t;
}

double ShearProfile::distance_to_interval(cplx z) {
  double x = std::clamp(z.real(), 0.0, 1.0);
  return std::abs(z - cplx(x, 0.0));
}

ShearProfile make_poiseuille() {
  return ShearProfile::polynomial("poiseuille", {0.0, 2.0, -1.0});
}

ShearProfile make_sin_profile() {
  return ShearProfile::sine("sin", 1.0, std::numbers::pi / 2);
}

ShearProfile make_couette() {
  return ShearProfile::polynomial("couette", {0.0, 1.0}, 1.0);
}

ShearProfile make_polynomial_profile(const std::vector<double>& coeffs) {
  return ShearProfile::polynomial("poly", coeffs);
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ShearProfile profile_from_spec(const std::string& spec) {
  std::string s = trim(spec);
  if (s == "poiseuille") return make_poiseuille();
  if (s == "sin") return make_sin_profile();
  if (s == "couette") return make_couette();
  if (s.rfind("poly", 0) == 0) {
    size_t lb = s.find('['), rb = s.find(']');
    if (lb == std::string::npos || rb == std::string::npos || rb < lb)
      throw Error(ErrorCode::InvalidArgument, "poly profile needs [a0, a1, ...]");
    std::string body = s.substr(lb + 1, rb - lb - 1);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream in(body);
    std::vector<double> coeffs;
    std::string tok;
    while (in >> tok) {
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (...) {
        used = 0;
      }
      if (used != tok.size())
        throw Error(ErrorCode::InvalidArgument, "bad poly coefficient '" + tok + "'");
      coeffs.push_back(v);
    }
    if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "empty poly profile");
    return make_polynomial_profile(coeffs);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown profile '" + s + "'");
}

CriticalPoint find_critical_point(const ShearProfile& profile, cplx c, cplx guess) {
  cplx z = guess;
  double tol = 1e-12 * std::max(1.0, std::abs(c));
  int settled = 0;
  for (int it = 1; it <= 50; ++it) {
    auto u = profile.eval(z);
    if (std::abs(u[1]) < 1e-10)
      throw Error(ErrorCode::DerivativeVanishes, "U' vanishes near the critical point");
    cplx step = (u[0] - c) / u[1];
    z -= step;
    // Keep polishing a couple of steps past the tolerance so repeated calls agree.
    if (std::abs(profile.value(z) - c) <= tol && std::abs(step) <= 1e-14)
      ++settled;
    if (settled >= 2 || (settled && std::abs(step) == 0.0)) {
      if (ShearProfile::distance_to_interval(z) > profile.domain_radius())
        throw Error(ErrorCode::InvalidArgument, "critical point outside the profile's analyticity radius");
      return {c, z, std::abs(profile.value(z) - c), it};
    }
  }
  throw Error(ErrorCode::NoConvergence, "Newton iteration for z_c did not converge");
}

}  // namespace osm
