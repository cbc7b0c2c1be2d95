#include "kerrlab/two_mode.hpp"

#include "internal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kerrlab {

namespace {

using detail::f128;

struct ModePair {
    detail::SecondOrderCache c1, c2;
    f128 eta = 0, om = 0, rt = 0;
};

ModePair make_pair_cache(const ModeParams& mode1, const ModeParams& mode2,
                         const BeamsplitterConfig& bs, Frame kind) {
    if (!(bs.eta >= 0.0 && bs.eta <= 1.0))
        throw std::invalid_argument("beamsplitter eta must lie in [0, 1]");
    ModePair mp;
    mp.c1 = detail::second_order_cache(mode1, kind);
    mp.c2 = detail::second_order_cache(mode2, kind);
    mp.eta = (f128)bs.eta;
    mp.om = 1 - mp.eta;
    mp.rt = sqrtq(mp.eta * mp.om);
    return mp;
}

struct SixQ {
    f128 vx1 = 0, vx2 = 0, vy1 = 0, vy2 = 0, cx = 0, cy = 0;
};

// Output (co)variances at a common analysis angle. The output quadratures
// decompose over the inputs as X1 = r X_a1 - t Y_a2, X2 = -t Y_a1 + r X_a2,
// Y1 = r Y_a1 + t X_a2, Y2 = t X_a1 + r Y_a2 (r^2 = eta, t^2 = 1 - eta).
SixQ six_common(const ModePair& mp, f128 theta0) {
    f128 m1a, m1ya, vxa, vya, cova;
    f128 m1b, m1yb, vxb, vyb, covb;
    mp.c1.at(theta0, m1a, m1ya, vxa, vya, cova);
    mp.c2.at(theta0, m1b, m1yb, vxb, vyb, covb);
    SixQ s;
    s.vx1 = mp.eta * vxa + mp.om * vyb;
    s.vx2 = mp.om * vya + mp.eta * vxb;
    s.vy1 = mp.eta * vya + mp.om * vxb;
    s.vy2 = mp.om * vxa + mp.eta * vyb;
    s.cx = -mp.rt * (cova + covb);
    s.cy = -s.cx;
    return s;
}

// Per-output angles theta1 (output 1) and theta2 (output 2); the conjugate
// quadratures sit at +pi/2 of each. The c_y = -c_x shortcut no longer holds,
// so every covariance is assembled from the two-angle closed form.
SixQ six_independent(const ModePair& mp, f128 th1, f128 th2) {
    const f128 half_pi = M_PIq / 2;
    f128 m1, m1y, vxa1, vya1, cov;
    mp.c1.at(th1, m1, m1y, vxa1, vya1, cov);
    f128 vxa2, vya2;
    mp.c1.at(th2, m1, m1y, vxa2, vya2, cov);
    f128 vxb1, vyb1;
    mp.c2.at(th1, m1, m1y, vxb1, vyb1, cov);
    f128 vxb2, vyb2;
    mp.c2.at(th2, m1, m1y, vxb2, vyb2, cov);
    SixQ s;
    s.vx1 = mp.eta * vxa1 + mp.om * vyb1;
    s.vx2 = mp.om * vya2 + mp.eta * vxb2;
    s.vy1 = mp.eta * vya1 + mp.om * vxb1;
    s.vy2 = mp.om * vxa2 + mp.eta * vyb2;
    s.cx = mp.rt * (mp.c1.cov_two(th1, th2 - half_pi) + mp.c2.cov_two(th1 - half_pi, th2));
    s.cy = mp.rt * (mp.c1.cov_two(th1 + half_pi, th2) + mp.c2.cov_two(th1, th2 + half_pi));
    return s;
}

f128 ds_value(const SixQ& s, int sign) {
    return (s.vx1 + s.vx2 + 2 * sign * s.cx) + (s.vy1 + s.vy2 - 2 * sign * s.cy);
}

f128 ds_best_value(const SixQ& s, int& sign_out) {
    const f128 plus = ds_value(s, +1);
    const f128 minus = ds_value(s, -1);
    sign_out = plus <= minus ? +1 : -1;
    return plus <= minus ? plus : minus;
}

f128 reid_value(const SixQ& s, int inferred_mode) {
    const f128 vxj = inferred_mode == 1 ? s.vx1 : s.vx2;
    const f128 vxk = inferred_mode == 1 ? s.vx2 : s.vx1;
    const f128 vyj = inferred_mode == 1 ? s.vy1 : s.vy2;
    const f128 vyk = inferred_mode == 1 ? s.vy2 : s.vy1;
    if (vxk < (f128)1e-12 || vyk < (f128)1e-12)
        throw std::domain_error(
            "reid_epr: partner variance below 1e-12, inferred variance is undefined");
    return (vxj - s.cx * s.cx / vxk) * (vyj - s.cy * s.cy / vyk);
}

f128 criterion_value(const SixQ& s, Criterion criterion, int reid_mode, int& sign_out) {
    if (criterion == Criterion::duan_simon) return ds_best_value(s, sign_out);
    sign_out = 0;
    return reid_value(s, reid_mode);
}

f128 fold_half_turn(f128 th) {
    th = fmodq(th, M_PIq);
    if (th < 0) th += M_PIq;
    return th;
}

void check_reid_mode(int reid_mode) {
    if (reid_mode != 1 && reid_mode != 2)
        throw std::invalid_argument("reid inferred mode must be 1 or 2");
}

// Golden-section minimization of fn over [lo, hi]; fn records its own best.
template <typename Fn>
void golden_refine(Fn&& fn, f128 lo, f128 hi, f128 tol) {
    const f128 gr = (sqrtq((f128)5) - 1) / 2;
    f128 a = lo, b = hi;
    f128 c = b - gr * (b - a);
    f128 d = a + gr * (b - a);
    f128 fc = fn(c);
    f128 fd = fn(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = fn(d);
        }
    }
}

}  // namespace

TwoModeVariances output_variances(const ModeParams& mode1, const ModeParams& mode2,
                                  const BeamsplitterConfig& bs, const FrameSpec& frame) {
    const ModePair mp = make_pair_cache(mode1, mode2, bs, frame.kind);
    const SixQ s = six_common(mp, (f128)frame.theta0);
    TwoModeVariances v;
    v.v_x1 = (double)s.vx1;
    v.v_x2 = (double)s.vx2;
    v.v_y1 = (double)s.vy1;
    v.v_y2 = (double)s.vy2;
    v.c_x1x2 = (double)s.cx;
    v.c_y1y2 = (double)s.cy;
    v.theta = frame.theta0;
    return v;
}

CriterionResult duan_simon(const TwoModeVariances& v, int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("duan_simon: sign must be +1 or -1");
    CriterionResult r;
    r.value = (v.v_x1 + v.v_x2 + 2.0 * sign * v.c_x1x2) +
              (v.v_y1 + v.v_y2 - 2.0 * sign * v.c_y1y2);
    r.threshold = 4.0;
    r.violated = r.value < r.threshold;
    r.sign_choice = sign;
    return r;
}

CriterionResult duan_simon_best(const TwoModeVariances& v) {
    const CriterionResult plus = duan_simon(v, +1);
    const CriterionResult minus = duan_simon(v, -1);
    return plus.value <= minus.value ? plus : minus;
}

CriterionResult reid_epr(const TwoModeVariances& v, int inferred_mode) {
    check_reid_mode(inferred_mode);
    SixQ s;
    s.vx1 = v.v_x1;
    s.vx2 = v.v_x2;
    s.vy1 = v.v_y1;
    s.vy2 = v.v_y2;
    s.cx = v.c_x1x2;
    s.cy = v.c_y1y2;
    CriterionResult r;
    r.value = (double)reid_value(s, inferred_mode);
    r.threshold = 1.0;
    r.violated = r.value < r.threshold;
    return r;
}

OptimizeResult optimize_angle(const ModeParams& mode1, const ModeParams& mode2,
                              const BeamsplitterConfig& bs, Criterion criterion,
                              const FrameSpec& frame, int reid_mode) {
    check_reid_mode(reid_mode);
    const ModePair mp = make_pair_cache(mode1, mode2, bs, frame.kind);

    f128 best_val = std::numeric_limits<double>::infinity();
    f128 best_th = 0;
    int best_sign = +1;
    auto probe = [&](f128 th) -> f128 {
        th = fold_half_turn(th);
        int sign = 0;
        const f128 val = criterion_value(six_common(mp, th), criterion, reid_mode, sign);
        if (val < best_val || (val == best_val && th < best_th)) {
            best_val = val;
            best_th = th;
            best_sign = sign;
        }
        return val;
    };

    // The canonical angle is always a candidate, so the optimized value can
    // never exceed the canonical one.
    probe((f128)frame.theta0);
    const int grid = 720;
    f128 best_grid_th = 0;
    f128 best_grid_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        const f128 th = M_PIq * i / grid;
        const f128 val = probe(th);
        if (val < best_grid_val) {
            best_grid_val = val;
            best_grid_th = th;
        }
    }
    const f128 h = M_PIq / grid;
    const f128 center = best_val < best_grid_val ? best_th : best_grid_th;
    golden_refine(probe, center - h, center + h, (f128)1e-10);

    OptimizeResult out;
    out.theta_opt = (double)best_th;
    out.result.value = (double)best_val;
    out.result.threshold = criterion == Criterion::duan_simon ? 4.0 : 1.0;
    out.result.violated = out.result.value < out.result.threshold;
    out.result.theta_opt = out.theta_opt;
    if (criterion == Criterion::duan_simon) out.result.sign_choice = best_sign;
    return out;
}

IndependentAngleResult optimize_angles_independent(const ModeParams& mode1,
                                                   const ModeParams& mode2,
                                                   const BeamsplitterConfig& bs,
                                                   Criterion criterion,
                                                   const FrameSpec& frame, int reid_mode) {
    check_reid_mode(reid_mode);
    const ModePair mp = make_pair_cache(mode1, mode2, bs, frame.kind);

    f128 best_val = std::numeric_limits<double>::infinity();
    f128 best_th1 = 0, best_th2 = 0;
    int best_sign = +1;
    auto probe = [&](f128 th1, f128 th2) -> f128 {
        th1 = fold_half_turn(th1);
        th2 = fold_half_turn(th2);
        int sign = 0;
        const f128 val =
            criterion_value(six_independent(mp, th1, th2), criterion, reid_mode, sign);
        if (val < best_val ||
            (val == best_val && (th1 < best_th1 || (th1 == best_th1 && th2 < best_th2)))) {
            best_val = val;
            best_th1 = th1;
            best_th2 = th2;
            best_sign = sign;
        }
        return val;
    };

    // Seed with the common-angle optimum so the wider search is never worse.
    const OptimizeResult common = optimize_angle(mode1, mode2, bs, criterion, frame, reid_mode);
    probe((f128)common.theta_opt, (f128)common.theta_opt);

    const int grid = 72;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) probe(M_PIq * i / grid, M_PIq * j / grid);

    const f128 h = M_PIq / grid;
    for (int round = 0; round < 4; ++round) {
        const f128 t2 = best_th2;
        golden_refine([&](f128 t) { return probe(t, t2); }, best_th1 - h, best_th1 + h,
                      (f128)1e-10);
        const f128 t1 = best_th1;
        golden_refine([&](f128 t) { return probe(t1, t); }, best_th2 - h, best_th2 + h,
                      (f128)1e-10);
    }

    IndependentAngleResult out;
    out.theta1 = (double)best_th1;
    out.theta2 = (double)best_th2;
    out.result.value = (double)best_val;
    out.result.threshold = criterion == Criterion::duan_simon ? 4.0 : 1.0;
    out.result.violated = out.result.value < out.result.threshold;
    if (criterion == Criterion::duan_simon) out.result.sign_choice = best_sign;
    return out;
}

OutputCumulants output_cumulants(const ModeParams& mode1, const ModeParams& mode2,
                                 const BeamsplitterConfig& bs, const FrameSpec& frame) {
    if (std::fabs(bs.eta - 0.5) > 1e-12)
        throw std::invalid_argument(
            "output_cumulants: the cumulant combination rules hold only for eta = 1/2");
    // X1 = (U1 + V2)/sqrt(2) with U = X(theta0), V = X(theta0 - pi/2) = -Y.
    const FrameSpec f_u = frame;
    const FrameSpec f_v{frame.kind, frame.theta0 - (double)(M_PIq / 2)};
    const detail::QuadMomentsQ qa = detail::quad_moments_q(mode1, f_u);
    const detail::QuadMomentsQ qb = detail::quad_moments_q(mode2, f_v);
    const detail::CumulantsQ ca = detail::cumulants_q(qa);
    const detail::CumulantsQ cb = detail::cumulants_q(qb);

    const f128 sqrt2 = sqrtq((f128)2);
    const f128 mean = (qa.m1 + qb.m1) / sqrt2;
    const f128 k3 = (ca.kappa3 + cb.kappa3) / (2 * sqrt2);
    const f128 k4_std = (ca.kappa4_std + cb.kappa4_std) / 4;
    const f128 k4_printed = (ca.kappa4_paper + cb.kappa4_paper) / 4 + 4 * mean * k3;

    OutputCumulants out;
    out.kappa3_x1 = (double)k3;
    out.kappa4_x1_printed = (double)k4_printed;
    out.kappa4_x1_std = (double)k4_std;
    out.mean_x1 = (double)mean;
    return out;
}

}
