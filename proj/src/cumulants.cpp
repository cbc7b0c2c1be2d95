#include "kerrlab/cumulants.hpp"

#include "internal.hpp"

#include <cmath>

namespace kerrlab {

namespace detail {

CumulantsQ cumulants_q(const QuadMomentsQ& q) {
    const f128 m1 = q.m1, m2 = q.m2, m3 = q.m3, m4 = q.m4;
    CumulantsQ c;
    c.kappa2 = m2 - m1 * m1;
    c.kappa3 = m3 + 2 * m1 * m1 * m1 - 3 * m1 * m2;
    c.kappa4_paper = m4 + 2 * m1 * m1 * m1 * m1 - 3 * m2 * m2 - m1 * c.kappa3;
    c.kappa4_std = m4 - 4 * m1 * m3 - 3 * m2 * m2 + 12 * m1 * m1 * m2 - 6 * m1 * m1 * m1 * m1;
    return c;
}

}  // namespace detail

CumulantSet cumulants(const QuadratureMoments& q) {
    detail::QuadMomentsQ mq;
    mq.m1 = q.m1;
    mq.m2 = q.m2;
    mq.m3 = q.m3;
    mq.m4 = q.m4;
    const detail::CumulantsQ c = detail::cumulants_q(mq);
    return {(double)c.kappa2, (double)c.kappa3, (double)c.kappa4_paper, (double)c.kappa4_std};
}

CumulantSet cumulants(const ModeParams& params, const FrameSpec& frame) {
    const detail::CumulantsQ c = detail::cumulants_q(detail::quad_moments_q(params, frame));
    return {(double)c.kappa2, (double)c.kappa3, (double)c.kappa4_paper, (double)c.kappa4_std};
}

double asymptotic_kappa3(double n_bar, double chi_n_t) {
    if (!(n_bar > 0)) throw std::invalid_argument("asymptotic_kappa3: n_bar must be > 0");
    return -256.0 * chi_n_t * chi_n_t * chi_n_t / std::sqrt(n_bar);
}

double number_state_kappa4(int n) {
    if (n < 0) throw std::invalid_argument("number_state_kappa4: n must be nonnegative");
    return -6.0 * n * (n + 1.0);
}

SkewRatios skew_ratio(const ModeParams& params, const FrameSpec& frame) {
    const detail::QuadMomentsQ q = detail::quad_moments_q(params, frame);
    if (fabsq(q.m1) < (detail::f128)1e-6)
        throw std::domain_error(
            "skew_ratio: quadrature mean is degenerate (|m1| ~ 0); "
            "use a lab-frame quadrature with a nonzero mean");
    const detail::CumulantsQ c = detail::cumulants_q(q);
    const detail::f128 m13 = q.m1 * q.m1 * q.m1;
    return {(double)(c.kappa3 / m13), (double)(c.kappa4_paper / (m13 * q.m1))};
}

}
