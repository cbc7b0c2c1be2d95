#pragma once

#include "kerrlab/kerr_moments.hpp"

namespace kerrlab {

// Cumulants of one quadrature distribution. Two fourth-order variants are
// carried side by side: kappa4_paper uses the combination
// m4 + 2 m1^4 - 3 m2^2 - m1*kappa3, kappa4_std is the standard fourth
// cumulant. They differ by exactly 3*m1*kappa3 and coincide when m1 = 0.
struct CumulantSet {
    double kappa2 = 0.0;
    double kappa3 = 0.0;
    double kappa4_paper = 0.0;
    double kappa4_std = 0.0;
};

// Cumulants from already-assembled raw moments (double arithmetic; fine for
// modest photon numbers and oracle-sized states).
CumulantSet cumulants(const QuadratureMoments& q);

// Cumulants evaluated end-to-end in extended precision from the mode
// parameters. Required at large photon numbers: kappa4 is a ~1e-26 relative
// cancellation of O(N^2) terms at N = 1e6, far below double resolution.
CumulantSet cumulants(const ModeParams& params, const FrameSpec& frame);

// Large-N closed form for the third cumulant of the rotating-frame Y
// quadrature: -256 * n_bar^{-1/2} * chi_n_t^3, with chi_n_t = N*chi_t.
double asymptotic_kappa3(double n_bar, double chi_n_t);

// Fourth cumulant of the number state |n>: -6 n (n+1).
double number_state_kappa4(int n);

struct SkewRatios {
    double r3 = 0.0;  // kappa3 / m1^3
    double r4 = 0.0;  // kappa4_paper / m1^4
};

// Mean-normalized cumulant ratios of the frame's X quadrature. Throws
// std::domain_error when |m1| is degenerate (e.g. the rotating-frame Y
// quadrature); use a lab-frame quadrature with a nonzero mean instead.
SkewRatios skew_ratio(const ModeParams& params, const FrameSpec& frame);

}
