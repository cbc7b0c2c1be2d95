#pragma once

#include "kerrlab/kerr_moments.hpp"

#include <optional>

namespace kerrlab {

// Beamsplitter b1 = sqrt(eta) a1 + i sqrt(1-eta) a2,
//              b2 = i sqrt(1-eta) a1 + sqrt(eta) a2.
struct BeamsplitterConfig {
    double eta = 0.5;
};

// The six second-order statistics of the beamsplitter outputs at a common
// analysis angle theta (X at theta, Y at theta + pi/2). For independent
// inputs c_y1y2 = -c_x1x2 exactly.
struct TwoModeVariances {
    double v_x1 = 1.0;
    double v_x2 = 1.0;
    double v_y1 = 1.0;
    double v_y2 = 1.0;
    double c_x1x2 = 0.0;
    double c_y1y2 = 0.0;
    double theta = 0.0;
};

// One entanglement-criterion evaluation. violated <=> value < threshold
// (strictly). sign_choice records the +/- branch for the sum criterion;
// theta_opt is set only by the angle optimizer.
struct CriterionResult {
    double value = 0.0;
    double threshold = 0.0;
    bool violated = false;
    std::optional<double> theta_opt;
    std::optional<int> sign_choice;
};

enum class Criterion { duan_simon, reid };

// Output (co)variances for two independent Kerr modes mixed on the
// beamsplitter, evaluated at the frame's effective angle.
TwoModeVariances output_variances(const ModeParams& mode1, const ModeParams& mode2,
                                  const BeamsplitterConfig& bs, const FrameSpec& frame);

// Sum criterion V(X1 +/- X2) + V(Y1 -/+ Y2) against the separability
// threshold 4. sign = +1 uses X1+X2 with Y1-Y2, sign = -1 the opposite pairing.
CriterionResult duan_simon(const TwoModeVariances& v, int sign);

// Best (smaller) of the two sign branches.
CriterionResult duan_simon_best(const TwoModeVariances& v);

// Product of inferred variances V_inf(X_j) * V_inf(Y_j) against threshold 1,
// with V_inf(X_j) = v_xj - c_x1x2^2 / v_xk. Throws std::domain_error when a
// partner variance (denominator) is below 1e-12.
CriterionResult reid_epr(const TwoModeVariances& v, int inferred_mode);

struct OptimizeResult {
    double theta_opt = 0.0;
    CriterionResult result;
};

// Minimizes the criterion over one common analysis angle theta in [0, pi)
// applied to both outputs: 720-point grid, then golden-section refinement to
// |dtheta| < 1e-10. The canonical angle (frame.theta0) is always included as
// a candidate, so the optimized value never exceeds the canonical one. Exact
// ties resolve to the lowest theta. For the sum criterion both sign branches
// are searched.
OptimizeResult optimize_angle(const ModeParams& mode1, const ModeParams& mode2,
                              const BeamsplitterConfig& bs, Criterion criterion,
                              const FrameSpec& frame, int reid_mode = 1);

struct IndependentAngleResult {
    double theta1 = 0.0;
    double theta2 = 0.0;
    CriterionResult result;
};

// Optional wider search with separate analysis angles for the two outputs
// (X1 at theta1, X2 at theta2, each Y at +pi/2). Coarse 72x72 grid plus
// coordinate-wise golden refinement. Never worse than the common-angle
// optimum.
IndependentAngleResult optimize_angles_independent(const ModeParams& mode1,
                                                   const ModeParams& mode2,
                                                   const BeamsplitterConfig& bs,
                                                   Criterion criterion,
                                                   const FrameSpec& frame,
                                                   int reid_mode = 1);

// Third/fourth cumulants of the output-1 X quadrature for a 50:50 splitter.
// kappa3_x1 and kappa4_x1_std follow exact cumulant additivity under linear
// mixing; kappa4_x1_printed adds the mean-dependent correction
// 4*mean_x1*kappa3_x1 on top of the paper-variant input combination. The two
// fourth-order values are reported side by side, not reconciled.
struct OutputCumulants {
    double kappa3_x1 = 0.0;
    double kappa4_x1_printed = 0.0;
    double kappa4_x1_std = 0.0;
    double mean_x1 = 0.0;
};

// Throws std::invalid_argument unless bs.eta == 1/2 (the combination rules
// are stated only for the balanced splitter).
OutputCumulants output_cumulants(const ModeParams& mode1, const ModeParams& mode2,
                                 const BeamsplitterConfig& bs, const FrameSpec& frame);

}
