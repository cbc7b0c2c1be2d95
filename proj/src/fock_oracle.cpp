#include "kerrlab/fock_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kerrlab::oracle {

namespace {

constexpr long double two_pi_l = 2.0L * std::numbers::pi_v<long double>;

std::complex<double> inner(const FockVector& a, const FockVector& b) {
    const size_t len = std::min(a.amplitudes.size(), b.amplitudes.size());
    std::complex<double> sum = 0.0;
    for (size_t n = 0; n < len; ++n) sum += std::conj(a.amplitudes[n]) * b.amplitudes[n];
    return sum;
}

// X(theta) |psi>. The output grows one slot, so repeated application is exact:
// truncation error only ever comes from the input state itself.
FockVector apply_quadrature(const FockVector& state, double theta) {
    const int len = static_cast<int>(state.amplitudes.size());
    FockVector out;
    out.amplitudes.assign(len + 1, 0.0);
    const std::complex<double> em = std::polar(1.0, -theta);
    const std::complex<double> ep = std::conj(em);
    for (int n = 0; n <= len; ++n) {
        std::complex<double> v = 0.0;
        if (n + 1 < len) v += em * std::sqrt(n + 1.0) * state.amplitudes[n + 1];
        if (n >= 1 && n - 1 < len) v += ep * std::sqrt((double)n) * state.amplitudes[n - 1];
        out.amplitudes[n] = v;
    }
    return out;
}

// a^k |psi> (k lowering operators).
FockVector lower(const FockVector& state, int k) {
    FockVector out = state;
    for (int step = 0; step < k; ++step) {
        const size_t len = out.amplitudes.size();
        FockVector next;
        next.amplitudes.assign(len > 1 ? len - 1 : 1, 0.0);
        for (size_t n = 0; n + 1 < len; ++n)
            next.amplitudes[n] = std::sqrt(n + 1.0) * out.amplitudes[n + 1];
        out = std::move(next);
    }
    return out;
}

double mean_photon_number(const FockVector& state) {
    double sum = 0.0;
    for (size_t n = 0; n < state.amplitudes.size(); ++n)
        sum += (double)n * std::norm(state.amplitudes[n]);
    return sum;
}

struct AppliedQuadrature {
    FockVector y1;  // X psi
    FockVector y2;  // X^2 psi
    // Raw moments <X^k>, k = 0..4.
    double m[5] = {1.0, 0.0, 0.0, 0.0, 0.0};
};

AppliedQuadrature applied(const FockVector& state, double theta) {
    AppliedQuadrature a;
    a.y1 = apply_quadrature(state, theta);
    a.y2 = apply_quadrature(a.y1, theta);
    a.m[1] = std::real(inner(state, a.y1));
    a.m[2] = std::real(inner(a.y1, a.y1));
    a.m[3] = std::real(inner(a.y1, a.y2));
    a.m[4] = std::real(inner(a.y2, a.y2));
    return a;
}

constexpr double comb[5][5] = {
    {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

// Raw moments of c1*A + c2*B for independent modes A (mode 1) and B (mode 2).
void mix_moments(double c1, const double (&ma)[5], double c2, const double (&mb)[5],
                 double (&out)[5]) {
    for (int k = 0; k <= 4; ++k) {
        double sum = 0.0;
        for (int j = 0; j <= k; ++j)
            sum += comb[k][j] * std::pow(c1, j) * std::pow(c2, k - j) * ma[j] * mb[k - j];
        out[k] = sum;
    }
}

}  // namespace

int TruncationPolicy::cutoff_for(double n_bar) const {
    if (cutoff_override) {
        if (*cutoff_override < 0)
            throw std::invalid_argument("TruncationPolicy: cutoff_override must be >= 0");
        return *cutoff_override;
    }
    return static_cast<int>(std::ceil(n_bar + 10.0 * std::sqrt(n_bar) + 20.0));
}

double FockVector::norm() const {
    double sum = 0.0;
    for (const auto& c : amplitudes) sum += std::norm(c);
    return std::sqrt(sum);
}

FockVector coherent_fock(std::complex<double> alpha, const TruncationPolicy& policy) {
    const double n_bar = std::norm(alpha);
    if (n_bar > max_oracle_n_bar)
        throw std::domain_error("coherent_fock: |alpha|^2 > 200 is outside the oracle range");
    const int cutoff = policy.cutoff_for(n_bar);
    FockVector state;
    state.amplitudes.assign(cutoff + 1, 0.0);
    if (n_bar == 0.0) {
        state.amplitudes[0] = 1.0;
        return state;
    }
    const double log_abs = 0.5 * std::log(n_bar);
    const double arg = std::arg(alpha);
    for (int n = 0; n <= cutoff; ++n) {
        const double log_mag = -0.5 * n_bar + n * log_abs - 0.5 * std::lgamma(n + 1.0);
        state.amplitudes[n] = std::polar(std::exp(log_mag), n * arg);
    }
    const double defect = std::fabs(state.norm() - 1.0);
    if (defect > 1e-12)
        throw std::runtime_error("coherent_fock: truncated norm defect " +
                                 std::to_string(defect) + " exceeds 1e-12");
    return state;
}

FockVector number_state(int n, const TruncationPolicy& policy) {
    if (n < 0) throw std::invalid_argument("number_state: n must be nonnegative");
    // One explicit zero above n marks the state as exact, not truncated.
    const int cutoff = std::max(n + 1, policy.cutoff_override.value_or(0));
    FockVector state;
    state.amplitudes.assign(cutoff + 1, 0.0);
    state.amplitudes[n] = 1.0;
    return state;
}

FockVector evolve_kerr(const FockVector& state, double chi_t) {
    const long double tau = std::fmod((long double)chi_t, two_pi_l);
    FockVector out = state;
    for (size_t n = 0; n < out.amplitudes.size(); ++n) {
        const long double ang = std::fmod(tau * (long double)(n * n), two_pi_l);
        out.amplitudes[n] *= std::polar(1.0, -(double)ang);
    }
    return out;
}

std::complex<double> oracle_moment(const FockVector& state, int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("oracle_moment: p, q must be nonnegative");
    if (p + q > 8) throw std::invalid_argument("oracle_moment: p + q must be <= 8");
    if (state.amplitudes.empty()) throw std::invalid_argument("oracle_moment: empty state");
    const double top = std::norm(state.amplitudes.back());
    const double n_bar = mean_photon_number(state);
    const double scale = std::max(1.0, std::pow(n_bar, 0.5 * (p + q)));
    const double leak = 2.0 * top * std::pow((double)state.cutoff(), p + q);
    if (leak > 1e-9 * scale)
        throw std::runtime_error("oracle_moment: truncation leakage " + std::to_string(leak) +
                                 " could bias <a^dag^" + std::to_string(p) + " a^" +
                                 std::to_string(q) + ">");
    return inner(lower(state, p), lower(state, q));
}

QuadratureMoments oracle_quadrature_moments(const FockVector& state, double theta) {
    const AppliedQuadrature ax = applied(state, theta);
    const FockVector z1 = apply_quadrature(state, theta + std::numbers::pi / 2);
    QuadratureMoments out;
    out.theta_effective = theta;
    out.m1 = ax.m[1];
    out.m2 = ax.m[2];
    out.m3 = ax.m[3];
    out.m4 = ax.m[4];
    const double m1y = std::real(inner(state, z1));
    out.cov_xy = std::real(inner(ax.y1, z1)) - out.m1 * m1y;
    return out;
}

double oracle_quadrature_covariance(const FockVector& state, double theta_a, double theta_b) {
    const FockVector ya = apply_quadrature(state, theta_a);
    const FockVector yb = apply_quadrature(state, theta_b);
    const double m1a = std::real(inner(state, ya));
    const double m1b = std::real(inner(state, yb));
    return std::real(inner(ya, yb)) - m1a * m1b;
}

OracleTwoMode oracle_two_mode(const ModeParams& mode1, const ModeParams& mode2,
                              const BeamsplitterConfig& bs, double theta,
                              const TruncationPolicy& policy) {
    if (!(bs.eta >= 0.0 && bs.eta <= 1.0))
        throw std::invalid_argument("oracle_two_mode: eta must lie in [0, 1]");
    const double r = std::sqrt(bs.eta);
    const double t = std::sqrt(1.0 - bs.eta);

    const FockVector psi1 = evolve_kerr(coherent_fock(mode1.alpha, policy), mode1.chi_t);
    const FockVector psi2 = evolve_kerr(coherent_fock(mode2.alpha, policy), mode2.chi_t);

    // Output quadratures decompose over the input modes as
    //   X1 = r U1 + t V2,  X2 = t V1 + r U2,
    //   Y1 = r W1 + t U2,  Y2 = t U1 + r W2
    // with U = X(theta), V = X(theta - pi/2), W = X(theta + pi/2).
    const double half_pi = std::numbers::pi / 2;
    const AppliedQuadrature u1 = applied(psi1, theta);
    const AppliedQuadrature v1 = applied(psi1, theta - half_pi);
    const AppliedQuadrature w1 = applied(psi1, theta + half_pi);
    const AppliedQuadrature u2 = applied(psi2, theta);
    const AppliedQuadrature v2 = applied(psi2, theta - half_pi);
    const AppliedQuadrature w2 = applied(psi2, theta + half_pi);

    double mx1[5], mx2[5], my1[5], my2[5];
    mix_moments(r, u1.m, t, v2.m, mx1);
    mix_moments(t, v1.m, r, u2.m, mx2);
    mix_moments(r, w1.m, t, u2.m, my1);
    mix_moments(t, u1.m, r, w2.m, my2);

    OracleTwoMode out;
    out.variances.theta = theta;
    out.variances.v_x1 = mx1[2] - mx1[1] * mx1[1];
    out.variances.v_x2 = mx2[2] - mx2[1] * mx2[1];
    out.variances.v_y1 = my1[2] - my1[1] * my1[1];
    out.variances.v_y2 = my2[2] - my2[1] * my2[1];

    // Same-mode products are symmetrized via Re<A psi, B psi>; cross-mode
    // products factor by independence.
    const double uv1 = std::real(inner(u1.y1, v1.y1));
    const double vu2 = std::real(inner(v2.y1, u2.y1));
    const double wu1 = std::real(inner(w1.y1, u1.y1));
    const double uw2 = std::real(inner(u2.y1, w2.y1));
    const double x1x2 = r * t * (uv1 + vu2) + r * r * u1.m[1] * u2.m[1] +
                        t * t * v2.m[1] * v1.m[1];
    const double y1y2 = r * t * (wu1 + uw2) + r * r * w1.m[1] * w2.m[1] +
                        t * t * u2.m[1] * u1.m[1];
    out.variances.c_x1x2 = x1x2 - mx1[1] * mx2[1];
    out.variances.c_y1y2 = y1y2 - my1[1] * my2[1];

    const double m1 = mx1[1], m2 = mx1[2], m3 = mx1[3], m4 = mx1[4];
    out.kappa3_x1 = m3 + 2 * m1 * m1 * m1 - 3 * m1 * m2;
    out.kappa4_x1_std = m4 - 4 * m1 * m3 - 3 * m2 * m2 + 12 * m1 * m1 * m2 - 6 * m1 * m1 * m1 * m1;
    out.mean_x1 = m1;
    return out;
}

}
