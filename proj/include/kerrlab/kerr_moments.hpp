#pragma once

#include <complex>
#include <stdexcept>

namespace kerrlab {

// One Kerr-evolved coherent mode: amplitude alpha, interaction angle chi_t
// (the product of the nonlinearity and the evolution time, in radians).
struct ModeParams {
    std::complex<double> alpha{0.0, 0.0};
    double chi_t = 0.0;

    double n_bar() const { return std::norm(alpha); }
};

enum class Frame { lab, rotating };

// Analysis frame for quadratures. In the lab frame the effective angle is
// theta0; in the rotating frame the analysis angle co-rotates with the
// mean-field phase, theta_eff = theta0 - 2*N*chi_t, so that the frame tracks
// the deterministic Kerr rotation of <a>.
struct FrameSpec {
    Frame kind = Frame::lab;
    double theta0 = 0.0;
};

// First four raw moments of X(theta) = a e^{-i theta} + a^dag e^{i theta},
// plus the symmetrized covariance of X(theta) and X(theta + pi/2).
struct QuadratureMoments {
    double theta_effective = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    double cov_xy = 0.0;
};

// Normally-ordered operator moment <a^dag^p a^q> of the Kerr-evolved
// coherent state:
//   (alpha*)^p alpha^q * exp(-i chi_t (q^2 - p^2)) * exp(N (e^{-2 i chi_t (q-p)} - 1)).
// Finite for any chi_t and for n_bar well beyond 1e8 (the oscillating factor
// has magnitude <= 1; only |alpha|^{p+q} grows).
std::complex<double> kerr_moment(const ModeParams& params, int p, int q);

// The accumulated mean-field phase 2*N*chi_t (the angle the rotating frame
// compensates).
double mean_field_angle(const ModeParams& params);

// Effective analysis angle for the frame: theta0 in the lab,
// theta0 - 2*N*chi_t in the rotating frame.
double effective_angle(const ModeParams& params, const FrameSpec& frame);

// All quadrature moments at the frame's effective angle. Assembled internally
// in extended (128-bit) precision so the downstream cumulant cancellations
// survive at large photon numbers.
QuadratureMoments quadrature_moments(const ModeParams& params, const FrameSpec& frame);

// V(X(theta_eff)) = m2 - m1^2.
double variance(const ModeParams& params, const FrameSpec& frame);

// Symmetrized covariance of X(theta_a) and X(theta_b) for two arbitrary
// analysis angles in the same frame (theta_a, theta_b are theta0 values;
// the frame shift applies to both). Needed by the independent-angle
// criterion search.
double quadrature_covariance(const ModeParams& params, const FrameSpec& frame,
                             double theta_a, double theta_b);

}
