#pragma once

#include "kerrlab/kerr_moments.hpp"
#include "kerrlab/two_mode.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace kerrlab::oracle {

// Cutoff selection for truncated number-basis states. The default formula
// ceil(N + 10 sqrt(N) + 20) keeps the excluded Poisson tail below
// tail_tolerance for every N in the oracle range.
struct TruncationPolicy {
    double tail_tolerance = 1e-14;
    std::optional<int> cutoff_override;

    int cutoff_for(double n_bar) const;
};

// Truncated number-basis state: amplitudes[n] for n = 0..cutoff.
struct FockVector {
    std::vector<std::complex<double>> amplitudes;

    int cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
    double norm() const;
};

inline constexpr double max_oracle_n_bar = 200.0;

// Coherent state c_n = e^{-N/2} alpha^n / sqrt(n!), accumulated in the log
// domain so the factorials never overflow. Throws std::domain_error for
// |alpha|^2 > 200 (the closed-form engine has no such limit). The
// constructed norm must land within 1e-12 of unity or construction fails.
FockVector coherent_fock(std::complex<double> alpha, const TruncationPolicy& policy = {});

// Number state |n> in a truncated basis with raising headroom.
FockVector number_state(int n, const TruncationPolicy& policy = {});

// Kerr evolution multiplies c_n by e^{-i chi_t n^2} (number-diagonal), so the
// norm is preserved exactly and everything revives at chi_t = 2 pi.
FockVector evolve_kerr(const FockVector& state, double chi_t);

// <a^dag^p a^q> by exact ladder application (p + q <= 8). Reports truncation
// leakage as an error when the state's boundary mass could bias the moment.
std::complex<double> oracle_moment(const FockVector& state, int p, int q);

// Quadrature moments of X(theta) by repeated operator application; the
// independent check for the closed-form assembly.
QuadratureMoments oracle_quadrature_moments(const FockVector& state, double theta);

// Symmetrized covariance of X(theta_a), X(theta_b) from state applications.
double oracle_quadrature_covariance(const FockVector& state, double theta_a, double theta_b);

struct OracleTwoMode {
    TwoModeVariances variances;
    double kappa3_x1 = 0.0;
    double kappa4_x1_std = 0.0;
    double mean_x1 = 0.0;
};

// Two-mode statistics of the beamsplitter outputs at a common analysis angle
// theta, computed in the moment algebra: output X-power moments expand into
// binomial sums of products of single-mode moments (input independence),
// never through the closed-form output formulas under test.
OracleTwoMode oracle_two_mode(const ModeParams& mode1, const ModeParams& mode2,
                              const BeamsplitterConfig& bs, double theta,
                              const TruncationPolicy& policy = {});

}
