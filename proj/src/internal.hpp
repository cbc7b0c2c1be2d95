#pragma once

// Private extended-precision plumbing shared by the closed-form modules.

#include "kerrlab/kerr_moments.hpp"
#include "quad_math.hpp"

namespace kerrlab::detail {

// Normally-ordered <a_theta^dag^p a_theta^q> at the frame's effective angle,
// fully in 128-bit floats. The rotating frame's mean-field rotation is folded
// into the phase analytically (see sin_residual) instead of being subtracted
// numerically.
Cq angled_moment_q(const ModeParams& params, int p, int q, const FrameSpec& frame);

struct QuadMomentsQ {
    f128 theta_eff = 0;
    f128 m1 = 0;
    f128 m1y = 0;
    f128 m2 = 0;
    f128 m3 = 0;
    f128 m4 = 0;
    f128 cov = 0;
};

QuadMomentsQ quad_moments_q(const ModeParams& params, const FrameSpec& frame);

struct CumulantsQ {
    f128 kappa2 = 0;
    f128 kappa3 = 0;
    f128 kappa4_paper = 0;
    f128 kappa4_std = 0;
};

// Moment-to-cumulant combination, kept in 128-bit floats because the m4 terms
// cancel to a tiny residual at large photon number.
CumulantsQ cumulants_q(const QuadMomentsQ& q);

// First/second-order statistics cache for fast theta scans: the operator
// moments <a> and <a^2> do not depend on the analysis angle, so a scan over
// theta only rotates their phases.
struct SecondOrderCache {
    f128 n_bar = 0;
    f128 magA = 0, phaseA = 0;  // <a_theta> = magA e^{i(phaseA - theta0)}
    f128 magB = 0, phaseB = 0;  // <a_theta^2> = magB e^{i(phaseB - 2 theta0)}

    void at(f128 theta0, f128& m1, f128& m1y, f128& vx, f128& vy, f128& cov) const;

    // Symmetrized covariance of X(theta_a), X(theta_b).
    f128 cov_two(f128 theta_a, f128 theta_b) const;
};

SecondOrderCache second_order_cache(const ModeParams& params, Frame kind);

}
