#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

inline constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
inline constexpr long double kAiP0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)

// Maclaurin data: Ai, Bi, Ai', and the primitives of Ai from 0, to four derivatives deep.
struct AirySeries {
  cplx ai, bi, dai, dbi;
  cplx ai_int1, ai_int2;  // int_0^z Ai, int_0^z int_0^t Ai
};

inline AirySeries airy_series(cplx zd) {
  lcplx z(zd.real(), zd.imag());
  // f = sum a_n z^n, g = sum b_n z^n with f'' = z f, f(0) = 1, f'(0) = 0; g(0) = 0, g'(0) = 1.
  const int n_max = 400;
  std::vector<long double> a(n_max + 3, 0.0L), b(n_max + 3, 0.0L);
  a[0] = 1.0L;
  b[1] = 1.0L;
  for (int n = 0; n + 3 <= n_max; ++n) {
    a[n + 3] = a[n] / ((n + 3.0L) * (n + 2.0L));
    b[n + 3] = b[n] / ((n + 3.0L) * (n + 2.0L));
  }
  lcplx f = 0, g = 0, df = 0, dg = 0, f1 = 0, g1 = 0, f2 = 0, g2 = 0, p = 1;
  lcplx pm1 = 0;  // z^(n-1)
  for (int n = 0; n <= n_max; ++n) {
    f += a[n] * p;
    g += b[n] * p;
    if (n > 0) {
      df += (long double)n * a[n] * pm1;
      dg += (long double)n * b[n] * pm1;
    }
    f1 += a[n] * p * z / (n + 1.0L);
    g1 += b[n] * p * z / (n + 1.0L);
    f2 += a[n] * p * z * z / ((n + 1.0L) * (n + 2.0L));
    g2 += b[n] * p * z * z / ((n + 1.0L) * (n + 2.0L));
    pm1 = p;
    p *= z;
  }
  const long double s3 = std::sqrt(3.0L);
  auto c = [](lcplx v) { return cplx(double(v.real()), double(v.imag())); };
  AirySeries r;
  r.ai = c(kAi0 * f - kAiP0 * g);
  r.bi = c(s3 * (kAi0 * f + kAiP0 * g));
  r.dai = c(kAi0 * df - kAiP0 * dg);
  r.dbi = c(s3 * (kAi0 * df + kAiP0 * dg));
  r.ai_int1 = c(kAi0 * f1 - kAiP0 * g1);
  r.ai_int2 = c(kAi0 * f2 - kAiP0 * g2);
  return r;
}

// k-th derivative of an analytic f at z by the trapezoidal Cauchy integral on a circle.
inline cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z, int k, double r = 0.25,
                              int n = 64) {
  cplx sum = 0.0;
  for (int j = 0; j < n; ++j) {
    cplx w = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    sum += f(z + r * w) / std::pow(w, k);
  }
  double fact = std::tgamma(k + 1.0);
  return sum * fact / (double(n) * std::pow(r, k));
}

// Composite Gauss-Legendre integral of f along the segment a -> b.
inline cplx segment_integral(const std::function<cplx(cplx)>& f, cplx a, cplx b, int panels = 200) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  cplx h = (b - a) / double(panels), sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    cplx mid = a + h * (p + 0.5);
    for (int q = 0; q < 5; ++q) sum += w[q] * f(mid + 0.5 * h * x[q]);
  }
  return 0.5 * h * sum;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611ULL);
  return g;
}

}  // namespace oracle
