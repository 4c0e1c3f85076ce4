#pragma once

// Truncated Taylor series arithmetic: c[0] + c[1] h + ... + c[N] h^N.

#include <array>
#include <complex>

namespace osm {

using cplx = std::complex<double>;

template <int N>
struct Jet {
  std::array<cplx, N + 1> c{};

  static Jet constant(cplx v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(cplx z0) {
    Jet j;
    j.c[0] = z0;
    if constexpr (N > 0) j.c[1] = 1.0;
    return j;
  }
  // d[k] is the k-th derivative at the expansion point.
  static Jet from_derivs(const cplx* d, int count) {
    Jet j;
    double f = 1.0;
    for (int k = 0; k <= N && k < count; ++k) {
      if (k > 1) f *= k;
      j.c[k] = d[k] / f;
    }
    return j;
  }
  cplx deriv(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }
  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(cplx s) {
    for (auto& v : c) v *= s;
    return *this;
  }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N>
Jet<N> operator-(Jet<N> a) { return a *= -1.0; }
template <int N>
Jet<N> operator*(Jet<N> a, cplx s) { return a *= s; }
template <int N>
Jet<N> operator*(cplx s, Jet<N> a) { return a *= s; }
template <int N>
Jet<N> operator+(Jet<N> a, cplx s) {
  a.c[0] += s;
  return a;
}
template <int N>
Jet<N> operator-(Jet<N> a, cplx s) {
  a.c[0] -= s;
  return a;
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> q;
  for (int k = 0; k <= N; ++k) {
    cplx s = a.c[k];
    for (int j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
    q.c[k] = s / b.c[0];
  }
  return q;
}

// a^p with the leading coefficient supplied by the caller (branch choice).
template <int N>
Jet<N> pow_jet(const Jet<N>& a, double p, cplx lead) {
  Jet<N> y;
  y.c[0] = lead;
  for (int k = 1; k <= N; ++k) {
    cplx s = 0.0;
    for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a.c[j] * y.c[k - j];
    y.c[k] = s / (double(k) * a.c[0]);
  }
  return y;
}

// Antiderivative with value v0 at the expansion point; top coefficient dropped.
template <int N>
Jet<N> integrate_jet(const Jet<N>& a, cplx v0) {
  Jet<N> r;
  r.c[0] = v0;
  for (int k = 1; k <= N; ++k) r.c[k] = a.c[k - 1] / double(k);
  return r;
}

template <int N>
Jet<N> differentiate_jet(const Jet<N>& a) {
  Jet<N> r;
  for (int k = 0; k < N; ++k) r.c[k] = a.c[k + 1] * double(k + 1);
  return r;
}

// f(g) where fd[m] = f^(m)(g.c[0]) for m = 0..N.
template <int N>
Jet<N> compose(const cplx* fd, const Jet<N>& g) {
  Jet<N> dg = g;
  dg.c[0] = 0.0;
  Jet<N> r = Jet<N>::constant(fd[0]);
  Jet<N> p = Jet<N>::constant(1.0);
  double f = 1.0;
  for (int m = 1; m <= N; ++m) {
    p = p * dg;
    f *= m;
    r += p * (fd[m] / f);
  }
  return r;
}

}  // namespace osm
