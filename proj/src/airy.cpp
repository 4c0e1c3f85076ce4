#include "osmodes/airy.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "osmodes/errors.hpp"

namespace osm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAi0 = 0.355028053887817239260;
constexpr double kAip0 = -0.258819403792806798405;
constexpr double kSeriesRadius = 1.5;
constexpr double kAsymptoticRadius = 16.0;
const cplx kOmega = std::polar(1.0, 2.0 * kPi / 3.0);
const cplx kCiFactor = std::polar(2.0 * kPi, kPi / 6.0);

// State of P''' = z P' with P = Ai(1,.), P' = Ai, P'' = Ai'.
struct Core {
  cplx p, a, d;
  cplx expo;
};

// Taylor step of length h from z0.
void taylor_step(cplx z0, cplx h, cplx& p, cplx& a, cplx& d) {
  cplx h2 = h * h, h3 = h2 * h;
  std::array<cplx, 3> b = {p, a * h, d * h2 / 2.0};
  cplx s0 = b[0] + b[1] + b[2];
  cplx s1 = b[1] + 2.0 * b[2];
  cplx s2 = 2.0 * b[2];
  double small = 0.0;
  for (int n = 0; n < 400; ++n) {
    // b[(n+3)] from b[n], b[n+1]; rotate a 3-window.
    cplx bn = b[n % 3], bn1 = b[(n + 1) % 3];
    double dn = n;
    cplx next = (z0 * (dn + 1.0) * bn1 * h2 + dn * bn * h3) /
                ((dn + 1.0) * (dn + 2.0) * (dn + 3.0));
    b[n % 3] = next;
    double m = dn + 3.0;
    s0 += next;
    s1 += m * next;
    s2 += m * (m - 1.0) * next;
    double mag = std::abs(next) * m * m;
    double scale = std::abs(s0) + std::abs(s1) + std::abs(s2);
    small = (mag <= 1e-18 * scale) ? small + 1 : 0;
    if (n > 6 && small >= 3) break;
  }
  p = s0;
  a = s1 / h;
  d = s2 / h2;
}

Core maclaurin(cplx w) {
  cplx p = -1.0 / 3.0, a = kAi0, d = kAip0;
  if (w != 0.0) taylor_step(0.0, w, p, a, d);
  return {p, a, d, 0.0};
}

// Mantissas relative to exp(-zeta(w)); valid for |w| >= 16, |arg w| <= 2pi/3.
Core asymptotic(cplx w) {
  cplx zeta = airy_zeta(w);
  cplx w14 = std::pow(w, 0.25);
  cplx sa = 1.0, sd = 1.0;
  double u = 1.0;
  cplx zi = 1.0 / zeta, zp = 1.0;
  double last = 1e300;
  for (int k = 1; k < 200; ++k) {
    double dk = k;
    u *= (6 * dk - 5) * (6 * dk - 3) * (6 * dk - 1) / ((2 * dk - 1) * 216.0 * dk);
    double v = -(6 * dk + 1) / (6 * dk - 1) * u;
    zp *= -zi;
    cplx ta = u * zp, td = v * zp;
    double mag = std::abs(ta) + std::abs(td);
    if (mag > last) break;
    sa += ta;
    sd += td;
    last = mag;
    if (mag < 1e-18) break;
  }
  double c0 = 0.5 / std::sqrt(kPi);
  cplx a = c0 * sa / w14;
  cplx d = -c0 * w14 * sd;
  // Ai(1,w) = -B' Ai + B Ai' with B ~ sum b_k w^(-1-3k).
  cplx wi = 1.0 / w, w3i = wi * wi * wi;
  cplx B = 0.0, Bp = 0.0;
  double bk = 1.0;
  cplx pw = wi;
  last = 1e300;
  for (int k = 0; k < 100; ++k) {
    cplx tb = bk * pw;
    cplx tbp = -(1.0 + 3.0 * k) * bk * pw * wi;
    double mag = std::abs(tb);
    if (mag > last) break;
    B += tb;
    Bp += tbp;
    last = mag;
    if (mag < 1e-18 * std::abs(B)) break;
    bk *= (3.0 * k + 1.0) * (3.0 * k + 2.0);
    pw *= w3i;
  }
  cplx p = -Bp * a + B * d;
  return {p, a, d, -zeta};
}

// |arg w| <= 2pi/3; mantissas relative to exp(-zeta(w)).
Core sector_core(cplx w) {
  double r = std::abs(w);
  cplx target = -airy_zeta(w);
  if (r <= kSeriesRadius) {
    Core c = maclaurin(w);
    cplx s = std::exp(-target);
    return {c.p * s, c.a * s, c.d * s, target};
  }
  if (r >= kAsymptoticRadius) return asymptotic(w);
  double theta = std::arg(w);
  cplx dir = std::polar(1.0, theta);
  cplx z0;
  cplx p, a, d;
  cplx base_expo;
  if (std::abs(theta) <= kPi / 3.0) {
    z0 = kAsymptoticRadius * dir;
    Core c = asymptotic(z0);
    p = c.p, a = c.a, d = c.d;
    base_expo = c.expo;
  } else {
    z0 = kSeriesRadius * dir;
    Core c = maclaurin(z0);
    p = c.p, a = c.a, d = c.d;
    base_expo = 0.0;
  }
  cplx total = w - z0;
  double len = std::abs(total);
  cplx z = z0;
  double done = 0.0;
  while (done < len) {
    double hmax = std::min(1.0, 3.0 / std::sqrt(std::abs(z)));
    double step = std::min(hmax, len - done);
    cplx h = step * (total / len);
    taylor_step(z, h, p, a, d);
    z += h;
    done += step;
  }
  cplx s = std::exp(base_expo - target);
  return {p * s, a * s, d * s, target};
}

Core core(cplx w) {
  if (std::abs(std::arg(w)) <= 2.0 * kPi / 3.0 + 1e-13) return sector_core(w);
  // Ai(w) = -omega Ai(omega w) - omega^2 Ai(omega^2 w).
  cplx w1 = kOmega * w, w2 = kOmega * kOmega * w;
  Core c1 = sector_core(w1), c2 = sector_core(w2);
  cplx E = c1.expo.real() >= c2.expo.real() ? c1.expo : c2.expo;
  if (E.real() < 0.0) E = 0.0;
  cplx s1 = std::exp(c1.expo - E), s2 = std::exp(c2.expo - E);
  cplx om = kOmega, om2 = kOmega * kOmega;
  Core r;
  r.expo = E;
  r.a = -om * c1.a * s1 - om2 * c2.a * s2;
  r.d = -om2 * c1.d * s1 - om * c2.d * s2;
  r.p = -std::exp(-E) - c1.p * s1 - c2.p * s2;
  return r;
}

AiryQuad from_core(const Core& c, cplx w) {
  return {c.a, c.d, c.p, w * c.p - c.d, c.expo};
}

void check_order(int order) {
  if (order < -2 || order > 2)
    throw Error(ErrorCode::UnsupportedOrder, "Airy order must lie in [-2, 2]");
}

// Mantissa and exponent of the requested member.
std::pair<cplx, cplx> eval_scaled(AiryKind kind, int order, cplx z) {
  check_order(order);
  AiryQuad q = kind == AiryKind::Ai ? airy_ai_family(z) : airy_ci_family(z);
  cplx m;
  switch (order) {
    case 0: m = q.f; break;
    case -1: m = q.df; break;
    case -2: m = z * q.f; break;
    case 1: m = q.p1; break;
    default: m = q.p2; break;
  }
  return {m, q.expo};
}

}  // namespace

AiryQuad AiryQuad::rescaled(cplx target_expo) const {
  cplx s = std::exp(expo - target_expo);
  return {f * s, df * s, p1 * s, p2 * s, target_expo};
}

cplx airy_zeta(cplx w) { return (2.0 / 3.0) * w * std::sqrt(w); }

AiryQuad airy_ai_family(cplx w) { return from_core(core(w), w); }

AiryQuad airy_ci_family(cplx w) {
  cplx u = kOmega * w;
  AiryQuad a = from_core(core(u), u);
  cplx om = kOmega, omb = std::conj(kOmega);
  return {kCiFactor * a.f, kCiFactor * om * a.df, kCiFactor * omb * a.p1,
          kCiFactor * omb * omb * a.p2, a.expo};
}

cplx airy_eval(AiryKind kind, int order, cplx z) {
  auto [m, e] = eval_scaled(kind, order, z);
  if (m == 0.0) return 0.0;
  double lm = std::log(std::abs(m)) + e.real();
  if (lm > 700.0) throw Error(ErrorCode::Overflow, "Airy value exceeds double range; use the log form");
  return m * std::exp(e);
}

LogValue airy_log_eval(AiryKind kind, int order, cplx z) {
  auto [m, e] = eval_scaled(kind, order, z);
  double am = std::abs(m);
  if (am == 0.0) return {-INFINITY, 1.0};
  return {std::log(am) + e.real(), (m / am) * std::polar(1.0, e.imag())};
}

cplx c_ai_ratio(cplx y) {
  AiryQuad q = airy_ai_family(y);
  if (std::abs(q.p1) <= 1e-14 * (std::abs(q.p2) + std::abs(q.df)))
    throw Error(ErrorCode::NearZeroDenominator, "Ai(1,Y) vanishes");
  return q.p2 / q.p1;
}

}  // namespace osm
