#pragma once

#include <complex>

namespace osm {

using cplx = std::complex<double>;

enum class AiryKind { Ai, Ci };

// f, f', first and second primitives, all scaled: true value = mantissa * exp(expo).
struct AiryQuad {
  cplx f, df, p1, p2;
  cplx expo;
  AiryQuad rescaled(cplx target_expo) const;
};

// zeta(w) = (2/3) w^(3/2), principal branch.
cplx airy_zeta(cplx w);

// Ai(w), Ai'(w), Ai(1,w), Ai(2,w); primitives anchored at +infinity.
AiryQuad airy_ai_family(cplx w);
// Ci = pi Bi + i pi Ai, the solution decaying on the ray arg z = 7pi/6;
// primitives anchored at infinity inside its decay sector.
AiryQuad airy_ci_family(cplx w);

// order 0: value, -1/-2: derivatives, +1/+2: primitives.
cplx airy_eval(AiryKind kind, int order, cplx z);

struct LogValue {
  double log_modulus;
  cplx phase;
};
LogValue airy_log_eval(AiryKind kind, int order, cplx z);

// Ai(2,Y) / Ai(1,Y).
cplx c_ai_ratio(cplx y);

}  // namespace osm
