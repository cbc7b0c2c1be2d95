#include "kerrlab/two_mode.hpp"

#include "kerrlab/cumulants.hpp"

#include "doctest.h"

#include <cmath>

using namespace kerrlab;

namespace {
constexpr double pi = 3.14159265358979323846;

// Principal variances of the single-mode covariance ellipse at the frame's
// effective angle.
std::pair<double, double> principal_variances(const ModeParams& m, const FrameSpec& f) {
    const QuadratureMoments q = quadrature_moments(m, f);
    const double vx = q.m2 - q.m1 * q.m1;
    const double vy = variance(m, FrameSpec{f.kind, f.theta0 + pi / 2});
    const double mid = 0.5 * (vx + vy);
    const double disc = std::hypot(0.5 * (vx - vy), q.cov_xy);
    return {mid + disc, mid - disc};
}
}

TEST_CASE("frozen balanced-splitter variances at N = 4, chi_t = 0.05") {
    const ModeParams m{2.0, 0.05};
    const TwoModeVariances v =
        output_variances(m, m, BeamsplitterConfig{0.5}, FrameSpec{Frame::lab, 0.3});
    CHECK(v.v_x1 == doctest::Approx(1.3134283573851877).epsilon(1e-11));
    CHECK(v.v_x2 == doctest::Approx(1.3134283573851877).epsilon(1e-11));
    CHECK(v.v_y1 == doctest::Approx(1.3134283573851877).epsilon(1e-11));
    CHECK(v.v_y2 == doctest::Approx(1.3134283573851877).epsilon(1e-11));
    CHECK(v.c_x1x2 == doctest::Approx(-0.28179382009574816).epsilon(1e-11));
    CHECK(v.c_y1y2 == doctest::Approx(0.28179382009574816).epsilon(1e-11));

    const CriterionResult plus = duan_simon(v, +1);
    const CriterionResult minus = duan_simon(v, -1);
    CHECK(plus.value == doctest::Approx(4.1265381491577582).epsilon(1e-11));
    CHECK(minus.value == doctest::Approx(6.3808887099237435).epsilon(1e-11));
    CHECK(plus.threshold == 4.0);
    CHECK_FALSE(plus.violated);
    CHECK(plus.sign_choice.value() == 1);
    CHECK(minus.sign_choice.value() == -1);

    const CriterionResult best = duan_simon_best(v);
    CHECK(best.value == doctest::Approx(plus.value));
    CHECK(best.sign_choice.value() == 1);

    const CriterionResult r1 = reid_epr(v, 1);
    CHECK(r1.value == doctest::Approx(1.5699337521884316).epsilon(1e-11));
    CHECK(r1.threshold == 1.0);
    CHECK_FALSE(r1.violated);
    // Identical inputs make the two inference directions equivalent.
    CHECK(reid_epr(v, 2).value == doctest::Approx(r1.value).epsilon(1e-13));
}

TEST_CASE("criterion argument validation") {
    const TwoModeVariances v;
    CHECK_THROWS_AS(duan_simon(v, 0), std::invalid_argument);
    CHECK_THROWS_AS(duan_simon(v, 2), std::invalid_argument);
    CHECK_THROWS_AS(reid_epr(v, 0), std::invalid_argument);
    CHECK_THROWS_AS(reid_epr(v, 3), std::invalid_argument);

    TwoModeVariances degenerate;
    degenerate.v_x2 = 1e-13;
    CHECK_THROWS_AS(reid_epr(degenerate, 1), std::domain_error);

    const ModeParams m{1.0, 0.01};
    CHECK_THROWS_AS(
        output_variances(m, m, BeamsplitterConfig{1.5}, FrameSpec{}),
        std::invalid_argument);
}

TEST_CASE("a fully transmitting splitter passes each mode through") {
    const ModeParams m1{2.0, 0.05};
    const ModeParams m2{1.2, 0.03};
    const FrameSpec f{Frame::lab, 0.7};
    const TwoModeVariances v = output_variances(m1, m2, BeamsplitterConfig{1.0}, f);
    CHECK(v.v_x1 == doctest::Approx(variance(m1, f)).epsilon(1e-13));
    CHECK(v.v_x2 == doctest::Approx(variance(m2, f)).epsilon(1e-13));
    CHECK(v.v_y1 ==
          doctest::Approx(variance(m1, FrameSpec{f.kind, f.theta0 + pi / 2})).epsilon(1e-13));
    CHECK(v.c_x1x2 == doctest::Approx(0.0));
    CHECK(v.c_y1y2 == doctest::Approx(0.0));
}

TEST_CASE("vacuum inputs sit exactly on both thresholds") {
    const ModeParams m{0.0, 0.0};
    const BeamsplitterConfig bs{0.5};
    const FrameSpec f{Frame::lab, 0.0};
    const TwoModeVariances v = output_variances(m, m, bs, f);
    CHECK(std::fabs(duan_simon(v, +1).value - 4.0) <= 1e-10);
    CHECK(std::fabs(duan_simon(v, -1).value - 4.0) <= 1e-10);
    CHECK(std::fabs(reid_epr(v, 1).value - 1.0) <= 1e-10);
    CHECK_FALSE(duan_simon(v, +1).violated);

    const OptimizeResult ds = optimize_angle(m, m, bs, Criterion::duan_simon, f);
    CHECK(std::fabs(ds.result.value - 4.0) <= 1e-10);
    CHECK_FALSE(ds.result.violated);
    const OptimizeResult re = optimize_angle(m, m, bs, Criterion::reid, f);
    CHECK(std::fabs(re.result.value - 1.0) <= 1e-10);
}

TEST_CASE("angle optimizer reproduces the frozen reference point") {
    // N = 25, chi_N_t = 1, balanced splitter, rotating frame. Reference
    // minimizer from an independent dense-grid + golden-section desk run.
    // Both criteria are exactly pi/2-periodic in the common analysis angle
    // (the sign branches swap under theta -> theta + pi/2), so the minimizer
    // is only defined modulo pi/2.
    const ModeParams m{5.0, 0.04};
    const BeamsplitterConfig bs{0.5};
    const FrameSpec f{Frame::rotating, 0.0};
    const double theta_ref = 0.93070842447910374;

    const OptimizeResult ds = optimize_angle(m, m, bs, Criterion::duan_simon, f);
    CHECK(ds.result.value == doctest::Approx(6.3056850747370063).epsilon(1e-8));
    CHECK(std::fabs(std::remainder(ds.theta_opt - theta_ref, pi / 2)) <= 1e-6);
    CHECK(ds.result.theta_opt.has_value());
    CHECK(ds.result.sign_choice.has_value());

    const OptimizeResult re = optimize_angle(m, m, bs, Criterion::reid, f);
    CHECK(re.result.value == doctest::Approx(8.160249762654578).epsilon(1e-8));
    CHECK(std::fabs(std::remainder(re.theta_opt - theta_ref, pi / 2)) <= 1e-6);
}

TEST_CASE("optimized criteria match the covariance-ellipse geometry") {
    // For identical inputs on a balanced splitter the optimal common angle
    // gives DS = 4 * lambda_min and Reid = (2 l1 l2 / (l1 + l2))^2.
    const ModeParams m{std::sqrt(1000.0), 0.25 / 1000.0};
    const BeamsplitterConfig bs{0.5};
    const FrameSpec f{Frame::rotating, 0.0};
    const auto [l1, l2] = principal_variances(m, f);

    const OptimizeResult ds = optimize_angle(m, m, bs, Criterion::duan_simon, f);
    CHECK(ds.result.value == doctest::Approx(4.0 * l2).epsilon(1e-8));
    CHECK(ds.result.violated);  // 4 * 0.3826 < 4

    const OptimizeResult re = optimize_angle(m, m, bs, Criterion::reid, f);
    const double vinf = 2.0 * l1 * l2 / (l1 + l2);
    CHECK(re.result.value == doctest::Approx(vinf * vinf).epsilon(1e-8));
    CHECK(re.result.violated);
}

TEST_CASE("optimizer never loses to the canonical angle or a dense grid") {
    const BeamsplitterConfig bs{0.5};
    for (double u : {0.25, 1.0}) {
        const ModeParams m{5.0, u / 25.0};
        const FrameSpec f{Frame::rotating, 0.4};
        const OptimizeResult opt = optimize_angle(m, m, bs, Criterion::duan_simon, f);
        const CriterionResult canon = duan_simon_best(output_variances(m, m, bs, f));
        CHECK(opt.result.value <= canon.value + 1e-12);

        double grid_min = canon.value;
        for (int i = 0; i < 20000; ++i) {
            const FrameSpec probe{Frame::rotating, pi * i / 20000.0};
            grid_min = std::min(
                grid_min, duan_simon_best(output_variances(m, m, bs, probe)).value);
        }
        CHECK(opt.result.value <= grid_min + 1e-12);
        CHECK(grid_min - opt.result.value <= 1e-5);
    }
}

TEST_CASE("optimized value is frame independent for identical modes") {
    const ModeParams m{5.0, 0.04};
    const BeamsplitterConfig bs{0.5};
    const OptimizeResult lab = optimize_angle(m, m, bs, Criterion::duan_simon,
                                              FrameSpec{Frame::lab, 0.0});
    const OptimizeResult rot = optimize_angle(m, m, bs, Criterion::duan_simon,
                                              FrameSpec{Frame::rotating, 0.0});
    CHECK(lab.result.value == doctest::Approx(rot.result.value).epsilon(1e-8));
}

TEST_CASE("independent-angle search never loses to the common-angle one") {
    const ModeParams m1{2.0, 0.05};
    const ModeParams m2{1.5, 0.08};
    const BeamsplitterConfig bs{0.5};
    const FrameSpec f{Frame::lab, 0.3};
    for (Criterion c : {Criterion::duan_simon, Criterion::reid}) {
        const OptimizeResult common = optimize_angle(m1, m2, bs, c, f);
        const IndependentAngleResult indep =
            optimize_angles_independent(m1, m2, bs, c, f);
        CHECK(indep.result.value <= common.result.value + 1e-10);
    }
}

TEST_CASE("frozen output cumulants on the balanced splitter") {
    const ModeParams m{2.0, 0.05};
    const OutputCumulants oc =
        output_cumulants(m, m, BeamsplitterConfig{0.5}, FrameSpec{Frame::lab, 0.0});
    CHECK(oc.mean_x1 == doctest::Approx(3.7015263284313309).epsilon(1e-11));
    CHECK(oc.kappa3_x1 == doctest::Approx(0.27766161085999824).epsilon(1e-10));
    CHECK(oc.kappa4_x1_std == doctest::Approx(0.079399976445500897).epsilon(1e-10));
    CHECK(oc.kappa4_x1_printed == doctest::Approx(5.2080580580108098).epsilon(1e-10));

    CHECK_THROWS_AS(
        output_cumulants(m, m, BeamsplitterConfig{0.4}, FrameSpec{Frame::lab, 0.0}),
        std::invalid_argument);
}

TEST_CASE("output cumulants vanish for unevolved inputs") {
    const ModeParams m{{1.1, 0.4}, 0.0};
    const OutputCumulants oc =
        output_cumulants(m, m, BeamsplitterConfig{0.5}, FrameSpec{Frame::lab, 0.2});
    CHECK(std::fabs(oc.kappa3_x1) <= 1e-10);
    CHECK(std::fabs(oc.kappa4_x1_std) <= 1e-10);
}
