#include "kerrlab/kerr_moments.hpp"

#include "internal.hpp"

#include <cmath>

namespace kerrlab {
namespace detail {

namespace {

// Phase and log-magnitude pieces of the moment, with the lab-frame factors
// evaluated on chi_t reduced mod 2pi (they are exactly periodic) and the
// aperiodic rotating-frame rotation handled via sin_residual.
Cq moment_impl(const ModeParams& params, int p, int q, double theta0, Frame kind) {
    const f128 n = (f128)params.alpha.real() * params.alpha.real() +
                   (f128)params.alpha.imag() * params.alpha.imag();
    const f128 arg_alpha = atan2q((f128)params.alpha.imag(), (f128)params.alpha.real());
    const f128 tau = reduce_angle((f128)params.chi_t);
    const int d = q - p;

    const f128 s = sinq(d * tau);
    const f128 mag = powq(n, (f128)(p + q) / 2) * expq(-2 * n * s * s);

    f128 phase = d * (arg_alpha - (f128)theta0) - tau * (f128)(q * q - p * p);
    if (kind == Frame::rotating) {
        // -N sin(2 d chi_t) from the moment plus +2 d N chi_t from the frame.
        phase -= n * sin_residual(2 * d * (f128)params.chi_t);
    } else {
        phase -= n * sinq(2 * d * tau);
    }
    return cq_polar(mag, reduce_angle(phase));
}

}  // namespace

Cq angled_moment_q(const ModeParams& params, int p, int q, const FrameSpec& frame) {
    return moment_impl(params, p, q, frame.theta0, frame.kind);
}

QuadMomentsQ quad_moments_q(const ModeParams& params, const FrameSpec& frame) {
    const f128 n = (f128)params.alpha.real() * params.alpha.real() +
                   (f128)params.alpha.imag() * params.alpha.imag();
    const Cq a = angled_moment_q(params, 0, 1, frame);
    const Cq b = angled_moment_q(params, 0, 2, frame);
    const Cq c = angled_moment_q(params, 0, 3, frame);
    const Cq d = angled_moment_q(params, 1, 2, frame);
    const Cq f = angled_moment_q(params, 0, 4, frame);
    const Cq g = angled_moment_q(params, 1, 3, frame);

    QuadMomentsQ out;
    out.theta_eff = (f128)effective_angle(params, frame);
    out.m1 = 2 * a.re;
    out.m1y = 2 * a.im;
    out.m2 = 2 * n + 1 + 2 * b.re;
    out.m3 = 2 * c.re + 6 * d.re + 3 * out.m1;
    out.m4 = 2 * f.re + 8 * g.re + 6 * n * n + 12 * b.re + 12 * n + 3;
    out.cov = 2 * b.im - out.m1 * out.m1y;
    return out;
}

SecondOrderCache second_order_cache(const ModeParams& params, Frame kind) {
    SecondOrderCache cache;
    cache.n_bar = (f128)params.alpha.real() * params.alpha.real() +
                  (f128)params.alpha.imag() * params.alpha.imag();
    const Cq a = moment_impl(params, 0, 1, 0.0, kind);
    const Cq b = moment_impl(params, 0, 2, 0.0, kind);
    cache.magA = sqrtq(a.re * a.re + a.im * a.im);
    cache.phaseA = atan2q(a.im, a.re);
    cache.magB = sqrtq(b.re * b.re + b.im * b.im);
    cache.phaseB = atan2q(b.im, b.re);
    return cache;
}

void SecondOrderCache::at(f128 theta0, f128& m1, f128& m1y, f128& vx, f128& vy,
                          f128& cov) const {
    f128 sa, ca, sb, cb;
    sincosq(phaseA - theta0, &sa, &ca);
    sincosq(phaseB - 2 * theta0, &sb, &cb);
    m1 = 2 * magA * ca;
    m1y = 2 * magA * sa;
    const f128 re_b = magB * cb;
    vx = 2 * n_bar + 1 + 2 * re_b - m1 * m1;
    vy = 2 * n_bar + 1 - 2 * re_b - m1y * m1y;
    cov = 2 * magB * sb - m1 * m1y;
}

f128 SecondOrderCache::cov_two(f128 theta_a, f128 theta_b) const {
    const f128 m1a = 2 * magA * cosq(phaseA - theta_a);
    const f128 m1b = 2 * magA * cosq(phaseA - theta_b);
    return 2 * magB * cosq(phaseB - theta_a - theta_b) +
           (2 * n_bar + 1) * cosq(theta_b - theta_a) - m1a * m1b;
}

}  // namespace detail

std::complex<double> kerr_moment(const ModeParams& params, int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("kerr_moment: p, q must be nonnegative");
    const detail::Cq v = detail::moment_impl(params, p, q, 0.0, Frame::lab);
    return {(double)v.re, (double)v.im};
}

double mean_field_angle(const ModeParams& params) {
    return 2.0 * params.n_bar() * params.chi_t;
}

double effective_angle(const ModeParams& params, const FrameSpec& frame) {
    if (frame.kind == Frame::lab) return frame.theta0;
    return frame.theta0 - mean_field_angle(params);
}

QuadratureMoments quadrature_moments(const ModeParams& params, const FrameSpec& frame) {
    const detail::QuadMomentsQ q = detail::quad_moments_q(params, frame);
    QuadratureMoments out;
    out.theta_effective = (double)q.theta_eff;
    out.m1 = (double)q.m1;
    out.m2 = (double)q.m2;
    out.m3 = (double)q.m3;
    out.m4 = (double)q.m4;
    out.cov_xy = (double)q.cov;
    return out;
}

double variance(const ModeParams& params, const FrameSpec& frame) {
    const detail::QuadMomentsQ q = detail::quad_moments_q(params, frame);
    return (double)(q.m2 - q.m1 * q.m1);
}

double quadrature_covariance(const ModeParams& params, const FrameSpec& frame,
                             double theta_a, double theta_b) {
    const detail::SecondOrderCache cache = detail::second_order_cache(params, frame.kind);
    return (double)cache.cov_two((detail::f128)theta_a, (detail::f128)theta_b);
}

}
