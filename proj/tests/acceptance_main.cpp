// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. Run by ctest as "acceptance"; also runnable by hand from the
// build directory.
#include "kerrlab/cumulants.hpp"
#include "kerrlab/fock_oracle.hpp"
#include "kerrlab/kerr_moments.hpp"
#include "kerrlab/sweep.hpp"
#include "kerrlab/two_mode.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace kerrlab;

namespace {

constexpr double pi = 3.14159265358979323846;

double rel(double value, double reference) {
    return std::fabs(value - reference) / std::max(1.0, std::fabs(reference));
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// 1. Closed-form statistics match the truncated-Fock oracle across the
// parameter matrix, to 1e-9 relative, in under 10 seconds.
Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double n : {1.0, 4.0, 16.0, 25.0}) {
        for (double chi_t : {1e-3, 1e-2, 1e-1}) {
            const ModeParams mode{std::sqrt(n), chi_t};
            const oracle::FockVector psi =
                oracle::evolve_kerr(oracle::coherent_fock(mode.alpha), chi_t);
            for (double theta : {0.0, pi / 2, 0.3}) {
                const FrameSpec frame{Frame::lab, theta};
                const QuadratureMoments qa = quadrature_moments(mode, frame);
                const QuadratureMoments qo =
                    oracle::oracle_quadrature_moments(psi, theta);
                worst = std::max({worst, rel(qa.m1, qo.m1), rel(qa.m2, qo.m2),
                                  rel(qa.m3, qo.m3), rel(qa.m4, qo.m4),
                                  rel(qa.cov_xy, qo.cov_xy)});
                for (double eta : {0.3, 0.5, 0.7}) {
                    const BeamsplitterConfig bs{eta};
                    const TwoModeVariances va = output_variances(mode, mode, bs, frame);
                    const oracle::OracleTwoMode ot =
                        oracle::oracle_two_mode(mode, mode, bs, theta);
                    const TwoModeVariances& vo = ot.variances;
                    worst = std::max({worst, rel(va.v_x1, vo.v_x1), rel(va.v_x2, vo.v_x2),
                                      rel(va.v_y1, vo.v_y1), rel(va.v_y2, vo.v_y2),
                                      rel(va.c_x1x2, vo.c_x1x2), rel(va.c_y1y2, vo.c_y1y2)});
                    for (int sign : {+1, -1})
                        worst = std::max(worst, rel(duan_simon(va, sign).value,
                                                    duan_simon(vo, sign).value));
                    for (int j : {1, 2})
                        worst = std::max(worst, rel(reid_epr(va, j).value,
                                                    reid_epr(vo, j).value));
                    if (eta == 0.5) {
                        const OutputCumulants oc = output_cumulants(mode, mode, bs, frame);
                        worst = std::max(worst, rel(oc.kappa3_x1, ot.kappa3_x1));
                    }
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-9 && elapsed < 10.0;
    return {pass, fmt("oracle equivalence matrix: worst rel %.3e (tol 1e-9), %.2f s (< 10 s)",
                      worst, elapsed)};
}

// 2. Unevolved coherent states are exactly Gaussian: unit variance, vanishing
// kappa3/kappa4, threshold values for both criteria.
Outcome criterion_2() {
    std::mt19937 rng(20260819u);
    std::uniform_real_distribution<double> mag(0.0, 5.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> etas(0.0, 1.0);
    double worst_v = 0.0, worst_k = 0.0, worst_crit = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const ModeParams m1{std::polar(mag(rng), angle(rng)), 0.0};
        const ModeParams m2{std::polar(mag(rng), angle(rng)), 0.0};
        const FrameSpec frame{Frame::lab, angle(rng)};
        const BeamsplitterConfig bs{etas(rng)};

        worst_v = std::max(worst_v, std::fabs(variance(m1, frame) - 1.0));
        const CumulantSet c = cumulants(m1, frame);
        worst_k = std::max({worst_k, std::fabs(c.kappa3),
                            std::fabs(c.kappa4_paper), std::fabs(c.kappa4_std)});
        const TwoModeVariances v = output_variances(m1, m2, bs, frame);
        worst_crit = std::max({worst_crit, std::fabs(duan_simon(v, +1).value - 4.0),
                               std::fabs(duan_simon(v, -1).value - 4.0),
                               std::fabs(reid_epr(v, 1).value - 1.0)});
    }
    const bool pass = worst_v <= 1e-12 && worst_k <= 1e-10 && worst_crit <= 1e-10;
    return {pass, fmt("Gaussian null at chi_t=0: |V-1| %.1e (tol 1e-12), "
                      "|kappa| %.1e, |criteria-threshold| %.1e (tol 1e-10)",
                      worst_v, worst_k, worst_crit)};
}

// 3. Oracle kappa4 of |n> equals -6 n (n+1) for n = 0..100.
Outcome criterion_3() {
    double worst = 0.0;
    for (int n = 0; n <= 100; ++n) {
        const oracle::FockVector st = oracle::number_state(n);
        const CumulantSet c = cumulants(oracle::oracle_quadrature_moments(st, 0.0));
        const double ref = number_state_kappa4(n);
        worst = std::max({worst, rel(c.kappa4_std, ref), rel(c.kappa4_paper, ref)});
    }
    return {worst <= 1e-9,
            fmt("number-state kappa4 = -6n(n+1), n = 0..100: worst rel %.3e (tol 1e-9)", worst)};
}

// 4. Exact kappa3 tracks the large-N cubic within 10% over chi_N_t in [0.1, 1].
Outcome criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    const double n = 1e6;
    const FrameSpec frame{Frame::rotating, pi / 2};
    double worst = 0.0;
    for (int i = 0; i <= 18; ++i) {
        const double u = 0.1 + 0.9 * i / 18.0;
        const double exact = cumulants(ModeParams{std::sqrt(n), u / n}, frame).kappa3;
        const double asym = asymptotic_kappa3(n, u);
        worst = std::max(worst, std::fabs(exact - asym) / std::fabs(asym));
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 0.10 && elapsed < 1.0;
    return {pass, fmt("kappa3 vs -256 N^{-1/2} (chi_N_t)^3 at N=1e6: worst rel %.3f "
                      "(tol 0.10), %.3f s (< 1 s)", worst, elapsed)};
}

// 5. Early-time log-log slopes at N = 1e6: 3.00 +/- 0.05 and 4.00 +/- 0.05.
Outcome criterion_5() {
    const double n = 1e6;
    const FrameSpec frame{Frame::rotating, pi / 2};
    const int points = 25;
    std::vector<double> x(points), y3(points), y4(points);
    for (int i = 0; i < points; ++i) {
        const double u = std::pow(10.0, std::log10(0.01) +
                                            (std::log10(0.5) - std::log10(0.01)) * i /
                                                (points - 1));
        const CumulantSet c = cumulants(ModeParams{std::sqrt(n), u / n}, frame);
        x[i] = std::log(u);
        y3[i] = std::log(std::fabs(c.kappa3));
        y4[i] = std::log(std::fabs(c.kappa4_paper));
    }
    auto slope = [&](const std::vector<double>& y) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < points; ++i) {
            sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
        }
        return (points * sxy - sx * sy) / (points * sxx - sx * sx);
    };
    const double s3 = slope(y3);
    const double s4 = slope(y4);
    const bool pass = std::fabs(s3 - 3.0) <= 0.05 && std::fabs(s4 - 4.0) <= 0.05;
    return {pass, fmt("scaling slopes at N=1e6: |kappa3| %.5f (3.00 +/- 0.05), "
                      "|kappa4| %.5f (4.00 +/- 0.05)", s3, s4)};
}

// 6. Saturation and decay of kappa4 at chi_N_t = 25.
Outcome criterion_6() {
    const FrameSpec frame{Frame::rotating, pi / 2};
    auto k4 = [&](double n) {
        return std::fabs(cumulants(ModeParams{std::sqrt(n), 25.0 / n}, frame).kappa4_paper);
    };
    const double r100 = k4(100.0) / (6.0 * 100.0 * 101.0);
    const double r1000 = k4(1000.0) / (6.0 * 1000.0 * 1001.0);
    const double decade = k4(1e5) / k4(1e6);
    const bool pass = r100 >= 1.0 / 1.2 && r100 <= 1.2 && r1000 >= 1.0 / 1.2 &&
                      r1000 <= 1.2 && decade >= 9.0 && decade <= 11.0;
    return {pass, fmt("kappa4 saturation at chi_N_t=25: |kappa4|/6N(N+1) = %.4f (N=100), "
                      "%.4f (N=1000), within [1/1.2, 1.2]; decade ratio %.3f in [9, 11]",
                      r100, r1000, decade)};
}

// 7. Variance figure: squeezing exists, Heisenberg product never violated.
Outcome criterion_7() {
    const sweep::SweepResult r = sweep::figure_result(5);
    double min_v = 1e300, min_product = 1e300;
    for (const auto& row : r.rows) {
        const double vx = row.cells[1].number;
        const double vy = row.cells[2].number;
        min_v = std::min({min_v, vx, vy});
        min_product = std::min(min_product, vx * vy);
    }
    const bool pass = min_v < 1.0 && min_product >= 1.0 - 1e-9;
    return {pass, fmt("variance figure: min V = %.4f (< 1), min V_x V_y = %.12f (>= 1 - 1e-9)",
                      min_v, min_product)};
}

// 8. Sum-criterion figure: optimized curve certifies entanglement and never
// loses to either fixed branch.
Outcome criterion_8() {
    const sweep::SweepResult r = sweep::figure_result(6);
    double min_opt = 1e300;
    bool dominated = true;
    for (const auto& row : r.rows) {
        const double plus = row.cells[2].number;
        const double minus = row.cells[3].number;
        const double opt = row.cells[4].number;
        dominated = dominated && opt <= std::min(plus, minus) + 1e-9;
        min_opt = std::min(min_opt, opt);
    }
    const bool pass = min_opt < 4.0 && dominated;
    return {pass, fmt("sum-criterion figure: min optimized value %.4f (< 4), "
                      "optimized <= both branches pointwise: %s",
                      min_opt, dominated ? "yes" : "NO")};
}

// 9. Inferred-variance figure: optimized curve demonstrates the paradox and
// never loses to the canonical angle.
Outcome criterion_9() {
    const sweep::SweepResult r = sweep::figure_result(7);
    double min_opt = 1e300;
    bool dominated = true;
    for (const auto& row : r.rows) {
        const double canonical = row.cells[2].number;
        const double opt = row.cells[3].number;
        dominated = dominated && opt <= canonical + 1e-9;
        min_opt = std::min(min_opt, opt);
    }
    const bool pass = min_opt < 1.0 && dominated;
    return {pass, fmt("inferred-variance figure: min optimized product %.4f (< 1), "
                      "optimized <= canonical pointwise: %s",
                      min_opt, dominated ? "yes" : "NO")};
}

// 10. The two fourth-cumulant conventions differ by exactly 3 m1 kappa3 and
// coincide whenever m1 = 0.
Outcome criterion_10() {
    double worst = 0.0;
    for (double n : {1.0, 4.0, 16.0, 25.0}) {
        for (double chi_t : {1e-3, 1e-2, 1e-1}) {
            for (double theta : {0.0, pi / 2, 0.3}) {
                const ModeParams mode{std::sqrt(n), chi_t};
                const FrameSpec frame{Frame::lab, theta};
                const QuadratureMoments q = quadrature_moments(mode, frame);
                const CumulantSet c = cumulants(mode, frame);
                const double expected = 3.0 * q.m1 * c.kappa3;
                worst = std::max(worst, rel(c.kappa4_paper - c.kappa4_std, expected));
            }
        }
    }
    // m1 = 0 exactly: vacuum parameters and a number state via the oracle.
    const CumulantSet vac = cumulants(ModeParams{0.0, 0.0}, FrameSpec{});
    const CumulantSet num =
        cumulants(oracle::oracle_quadrature_moments(oracle::number_state(5), 0.7));
    const bool coincide =
        vac.kappa4_paper == vac.kappa4_std && num.kappa4_paper == num.kappa4_std;
    const bool pass = worst <= 1e-10 && coincide;
    return {pass, fmt("kappa4_paper - kappa4_std = 3 m1 kappa3: worst rel %.3e "
                      "(tol 1e-10); exact coincidence at m1 = 0: %s",
                      worst, coincide ? "yes" : "NO")};
}

// 11. Figure outputs are byte-identical across runs and thread counts.
Outcome criterion_11() {
    using namespace sweep;
    bool all_equal = true;
    for (int id : {5, 6}) {
        FigureOptions one;
        one.threads = 1;
        FigureOptions four;
        four.threads = 4;
        const std::string a = render(figure_result(id, one), Format::csv);
        const std::string b = render(figure_result(id, four), Format::csv);
        const std::string c = render(figure_result(id, four), Format::csv);
        const std::string ja = render(figure_result(id, one), Format::json);
        const std::string jb = render(figure_result(id, four), Format::json);
        all_equal = all_equal && a == b && b == c && ja == jb;
    }
    return {all_equal, std::string("figure reproduction determinism (ids 5, 6; CSV and JSON; "
                                   "threads 1 vs 4; repeated runs): ") +
                           (all_equal ? "byte-identical" : "MISMATCH")};
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
        criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i]();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::printf("criterion %zu: %s — %s\n", i + 1, outcome.pass ? "PASS" : "FAIL",
                    outcome.detail.c_str());
    }
    if (failures == 0)
        std::printf("acceptance: all 11 criteria PASS\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures;
}
