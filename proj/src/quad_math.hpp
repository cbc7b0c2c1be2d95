#pragma once

// Private 128-bit float helpers. Everything public stays double; the extended
// precision exists because the fourth-cumulant assembly cancels O(N^2) terms
// down to O(u^4/N) — a ~1e-26 relative cancellation at N = 1e6 that doubles
// cannot survive.

#include <quadmath.h>

namespace kerrlab::detail {

using f128 = __float128;

inline f128 two_pi_q() { return 2 * M_PIq; }

struct Cq {
    f128 re = 0;
    f128 im = 0;
};

inline Cq cq_polar(f128 mag, f128 phase) {
    f128 s, c;
    sincosq(phase, &s, &c);
    return {mag * c, mag * s};
}

inline Cq cq_mul(const Cq& a, const Cq& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline Cq cq_conj(const Cq& a) { return {a.re, -a.im}; }

// sin(x) - x, evaluated by series for small |x| where the direct subtraction
// would cancel. Used to combine the mean-field frame rotation with the
// moment phase analytically.
inline f128 sin_residual(f128 x) {
    if (fabsq(x) > (f128)0.125) return sinq(x) - x;
    const f128 x2 = x * x;
    f128 term = -x * x2 / 6;
    f128 sum = term;
    for (int k = 2; k < 32; ++k) {
        term *= -x2 / (f128)((2 * k) * (2 * k + 1));
        sum += term;
        if (fabsq(term) <= fabsq(sum) * (f128)1e-36) break;
    }
    return sum;
}

// Angle reduced into (-2pi, 2pi) before trig to keep precision at large
// accumulated phases.
inline f128 reduce_angle(f128 x) { return fmodq(x, two_pi_q()); }

}
