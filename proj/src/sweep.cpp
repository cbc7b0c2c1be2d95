#include "kerrlab/sweep.hpp"

#include "kerrlab/cumulants.hpp"
#include "kerrlab/fock_oracle.hpp"
#include "kerrlab/version.hpp"
#include "internal.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace kerrlab::sweep {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* frame_name(Frame f) { return f == Frame::lab ? "lab" : "rotating"; }
const char* axis_name(Axis a) { return a == Axis::chi_t ? "chi_t" : "chi_n_t"; }

const char* kappa4_name(Kappa4Variant v) {
    switch (v) {
        case Kappa4Variant::paper: return "paper";
        case Kappa4Variant::standard: return "standard";
        default: return "both";
    }
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic parallel map: each index is computed independently into a
// pre-sized buffer, so the result is identical for any thread count.
void parallel_for(int total, int threads, const std::function<void(int)>& fn) {
    threads = std::min(resolve_threads(threads), std::max(total, 1));
    if (threads <= 1 || total <= 1) {
        for (int i = 0; i < total; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int k = 0; k < threads; ++k) {
        const int lo = static_cast<int>((long long)total * k / threads);
        const int hi = static_cast<int>((long long)total * (k + 1) / threads);
        pool.emplace_back([&, lo, hi, k] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<double> linspace(double start, double stop, int steps) {
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i)
        v[i] = start + (stop - start) * static_cast<double>(i) / (steps - 1);
    return v;
}

std::vector<double> logspace(double start, double stop, int steps) {
    const double l0 = std::log10(start), l1 = std::log10(stop);
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i)
        v[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / (steps - 1));
    return v;
}

std::string meta_line(int figure_id, Frame frame, const std::string& axis) {
    std::string line = "# kerrlab v";
    line += version;
    line += " figure=";
    line += figure_id == 0 ? std::string("none") : std::to_string(figure_id);
    line += " frame=";
    line += frame_name(frame);
    line += " axis=" + axis;
    return line;
}

bool has_quantity(const SweepSpec& spec, Quantity q) {
    return std::find(spec.quantities.begin(), spec.quantities.end(), q) !=
           spec.quantities.end();
}

}  // namespace

void SweepSpec::validate() const {
    if (n_photons.empty())
        throw std::invalid_argument("SweepSpec.n_photons: at least one photon number required");
    for (double n : n_photons)
        if (!(n > 0) || !std::isfinite(n))
            throw std::invalid_argument("SweepSpec.n_photons: every N must be > 0 and finite");
    if (steps < 2) throw std::invalid_argument("SweepSpec.steps: must be >= 2");
    if (!(start < stop)) throw std::invalid_argument("SweepSpec.start: must be < stop");
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("SweepSpec.eta: must lie in [0, 1]");
    if (threads < 0) throw std::invalid_argument("SweepSpec.threads: must be >= 0");
    if (quantities.empty())
        throw std::invalid_argument("SweepSpec.quantities: at least one quantity required");
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();

    const bool want_moments = has_quantity(spec, Quantity::moments);
    const bool want_cumulants = has_quantity(spec, Quantity::cumulants);
    const bool want_variance = has_quantity(spec, Quantity::variance);
    const bool want_ds = has_quantity(spec, Quantity::duan_simon);
    const bool want_reid = has_quantity(spec, Quantity::reid);
    const bool want_asym = has_quantity(spec, Quantity::asymptotics);
    const bool k4_paper = spec.kappa4 != Kappa4Variant::standard;
    const bool k4_std = spec.kappa4 != Kappa4Variant::paper;

    SweepResult result;
    result.comment_lines.push_back(
        meta_line(0, spec.frame.kind, axis_name(spec.axis)));
    {
        std::string params = "# n_photons=";
        for (size_t i = 0; i < spec.n_photons.size(); ++i)
            params += (i ? "," : "") + fmt17(spec.n_photons[i]);
        params += " start=" + fmt17(spec.start) + " stop=" + fmt17(spec.stop) +
                  " steps=" + std::to_string(spec.steps) + " eta=" + fmt17(spec.eta) +
                  " theta0=" + fmt17(spec.frame.theta0) +
                  " optimize=" + (spec.optimize ? "1" : "0") +
                  " kappa4=" + kappa4_name(spec.kappa4);
        result.comment_lines.push_back(params);
    }

    result.columns = {"n", "chi_t", "chi_n_t", "theta0", "frame", "axis", "kappa4_variant"};
    if (want_moments)
        result.columns.insert(result.columns.end(), {"m1", "m2", "m3", "m4", "cov_xy"});
    if (want_cumulants) {
        result.columns.insert(result.columns.end(), {"kappa2", "kappa3"});
        if (k4_paper) result.columns.push_back("kappa4_paper");
        if (k4_std) result.columns.push_back("kappa4_std");
    }
    if (want_variance) result.columns.insert(result.columns.end(), {"v_x", "v_y"});
    if (want_ds) {
        result.columns.insert(result.columns.end(), {"ds_plus", "ds_minus", "ds_best"});
        if (spec.optimize)
            result.columns.insert(result.columns.end(), {"ds_opt", "ds_theta_opt"});
    }
    if (want_reid) {
        result.columns.push_back("reid1");
        if (spec.optimize)
            result.columns.insert(result.columns.end(), {"reid_opt", "reid_theta_opt"});
    }
    if (want_asym) result.columns.push_back("kappa3_asymptotic");

    const std::vector<double> grid = linspace(spec.start, spec.stop, spec.steps);
    const int total = static_cast<int>(spec.n_photons.size()) * spec.steps;
    result.rows.assign(total, {});

    parallel_for(total, spec.threads, [&](int index) {
        const double n = spec.n_photons[index / spec.steps];
        const double t = grid[index % spec.steps];
        const double chi_t = spec.axis == Axis::chi_t ? t : t / n;
        const double chi_n_t = spec.axis == Axis::chi_t ? n * t : t;
        const ModeParams mode{std::sqrt(n), chi_t};
        const BeamsplitterConfig bs{spec.eta};

        ResultRow row;
        auto& cells = row.cells;
        cells.reserve(result.columns.size());
        cells.push_back(Cell::num(n));
        cells.push_back(Cell::num(chi_t));
        cells.push_back(Cell::num(chi_n_t));
        cells.push_back(Cell::num(spec.frame.theta0));
        cells.push_back(Cell::str(frame_name(spec.frame.kind)));
        cells.push_back(Cell::str(axis_name(spec.axis)));
        cells.push_back(Cell::str(kappa4_name(spec.kappa4)));

        if (want_moments) {
            const QuadratureMoments qm = quadrature_moments(mode, spec.frame);
            cells.push_back(Cell::num(qm.m1));
            cells.push_back(Cell::num(qm.m2));
            cells.push_back(Cell::num(qm.m3));
            cells.push_back(Cell::num(qm.m4));
            cells.push_back(Cell::num(qm.cov_xy));
        }
        if (want_cumulants) {
            const CumulantSet c = cumulants(mode, spec.frame);
            cells.push_back(Cell::num(c.kappa2));
            cells.push_back(Cell::num(c.kappa3));
            if (k4_paper) cells.push_back(Cell::num(c.kappa4_paper));
            if (k4_std) cells.push_back(Cell::num(c.kappa4_std));
        }
        if (want_variance) {
            const detail::SecondOrderCache cache =
                detail::second_order_cache(mode, spec.frame.kind);
            detail::f128 m1, m1y, vx, vy, cov;
            cache.at((detail::f128)spec.frame.theta0, m1, m1y, vx, vy, cov);
            cells.push_back(Cell::num((double)vx));
            cells.push_back(Cell::num((double)vy));
        }
        if (want_ds || want_reid) {
            const TwoModeVariances v = output_variances(mode, mode, bs, spec.frame);
            if (want_ds) {
                cells.push_back(Cell::num(duan_simon(v, +1).value));
                cells.push_back(Cell::num(duan_simon(v, -1).value));
                cells.push_back(Cell::num(duan_simon_best(v).value));
                if (spec.optimize) {
                    const OptimizeResult opt = optimize_angle(
                        mode, mode, bs, Criterion::duan_simon, spec.frame);
                    cells.push_back(Cell::num(opt.result.value));
                    cells.push_back(Cell::num(opt.theta_opt));
                }
            }
            if (want_reid) {
                cells.push_back(Cell::num(reid_epr(v, 1).value));
                if (spec.optimize) {
                    const OptimizeResult opt =
                        optimize_angle(mode, mode, bs, Criterion::reid, spec.frame);
                    cells.push_back(Cell::num(opt.result.value));
                    cells.push_back(Cell::num(opt.theta_opt));
                }
            }
        }
        if (want_asym) cells.push_back(Cell::num(asymptotic_kappa3(n, chi_n_t)));

        result.rows[index] = std::move(row);
    });

    return result;
}

namespace {

struct FigureDefaults {
    Frame frame;
    double theta0;
    Axis axis;
    double start, stop;
    int steps;
};

FigureDefaults figure_defaults(int id) {
    switch (id) {
        case 1:
        case 2: return {Frame::rotating, M_PI / 2, Axis::chi_n_t, 0.002, 0.5, 250};
        case 3:
        case 4: return {Frame::rotating, M_PI / 2, Axis::chi_n_t, 10.0, 1e6, 21};
        case 5: return {Frame::lab, 0.0, Axis::chi_n_t, 0.0, 2.0, 401};
        case 6:
        case 7: return {Frame::lab, 0.0, Axis::chi_t, 0.0, 0.002, 201};
        default: throw std::invalid_argument("figure id must be in 1..7");
    }
}

}  // namespace

SweepResult figure_result(int id, const FigureOptions& options) {
    FigureDefaults d = figure_defaults(id);
    const Frame frame_kind = options.frame.value_or(d.frame);
    const Axis axis = options.axis.value_or(d.axis);
    const double start = options.start.value_or(d.start);
    const double stop = options.stop.value_or(d.stop);
    const int steps = options.steps.value_or(d.steps);
    if (steps < 2) throw std::invalid_argument("figure: steps must be >= 2");
    if (!(start < stop)) throw std::invalid_argument("figure: start must be < stop");
    if ((id == 3 || id == 4) && !(start > 0))
        throw std::invalid_argument("figure: start must be > 0 on the log N axis");
    const bool k4_paper = options.kappa4 != Kappa4Variant::standard;
    const bool k4_std = options.kappa4 != Kappa4Variant::paper;
    const FrameSpec frame{frame_kind, d.theta0};

    SweepResult result;

    if (id == 1 || id == 2) {
        const std::vector<double> ns{100.0, 1000.0, 1e4, 1e6};
        const std::vector<double> grid = linspace(start, stop, steps);
        result.comment_lines.push_back(meta_line(id, frame_kind, axis_name(axis)));
        std::string params = "# n_photons=100,1000,10000,1000000 theta0=";
        params += fmt17(d.theta0);
        params += " start=" + fmt17(start) + " stop=" + fmt17(stop) +
                  " steps=" + std::to_string(steps);
        if (id == 2) params += std::string(" kappa4=") + kappa4_name(options.kappa4);
        result.comment_lines.push_back(params);
        result.columns = {"n", "chi_n_t"};
        if (id == 1)
            result.columns.insert(result.columns.end(),
                                  {"kappa3_scaled", "kappa3_asymptotic_scaled"});
        else {
            if (k4_paper) result.columns.push_back("kappa4_paper_scaled");
            if (k4_std) result.columns.push_back("kappa4_std_scaled");
            result.columns.push_back("kappa4_number_state_scaled");
        }
        const int total = static_cast<int>(ns.size()) * steps;
        result.rows.assign(total, {});
        parallel_for(total, options.threads, [&](int index) {
            const double n = ns[index / steps];
            const double t = grid[index % steps];
            const double chi_t = axis == Axis::chi_t ? t : t / n;
            const double u = axis == Axis::chi_t ? n * t : t;
            const ModeParams mode{std::sqrt(n), chi_t};
            const CumulantSet c = cumulants(mode, frame);
            ResultRow row;
            row.cells.push_back(Cell::num(n));
            row.cells.push_back(Cell::num(u));
            if (id == 1) {
                row.cells.push_back(Cell::num(c.kappa3 * std::sqrt(n)));
                row.cells.push_back(Cell::num(asymptotic_kappa3(n, u) * std::sqrt(n)));
            } else {
                if (k4_paper) row.cells.push_back(Cell::num(c.kappa4_paper * n));
                if (k4_std) row.cells.push_back(Cell::num(c.kappa4_std * n));
                row.cells.push_back(Cell::num(-6.0 * n * (n + 1.0) * n));
            }
            result.rows[index] = std::move(row);
        });
        return result;
    }

    if (id == 3 || id == 4) {
        const double chi_n_t = 25.0;
        const std::vector<double> ns = logspace(start, stop, steps);
        result.comment_lines.push_back(meta_line(id, frame_kind, "n"));
        std::string params = "# chi_n_t=25 theta0=" + fmt17(d.theta0) +
                             " start=" + fmt17(start) + " stop=" + fmt17(stop) +
                             " steps=" + std::to_string(steps) + " n_spacing=log";
        if (id == 4) params += std::string(" kappa4=") + kappa4_name(options.kappa4);
        result.comment_lines.push_back(params);
        result.columns = {"n"};
        if (id == 3)
            result.columns.push_back("kappa3");
        else {
            if (k4_paper && k4_std) {
                result.columns.push_back("kappa4_paper");
                result.columns.push_back("kappa4_std");
            } else {
                result.columns.push_back("kappa4_kerr");
            }
            result.columns.push_back("kappa4_number_state");
        }
        result.rows.assign(steps, {});
        parallel_for(steps, options.threads, [&](int index) {
            const double n = ns[index];
            const ModeParams mode{std::sqrt(n), chi_n_t / n};
            const CumulantSet c = cumulants(mode, frame);
            ResultRow row;
            row.cells.push_back(Cell::num(n));
            if (id == 3) {
                row.cells.push_back(Cell::num(c.kappa3));
            } else {
                if (k4_paper) row.cells.push_back(Cell::num(c.kappa4_paper));
                if (k4_std) row.cells.push_back(Cell::num(c.kappa4_std));
                row.cells.push_back(Cell::num(-6.0 * n * (n + 1.0)));
            }
            result.rows[index] = std::move(row);
        });
        return result;
    }

    if (id == 5) {
        const double n = 1000.0;
        const std::vector<double> grid = linspace(start, stop, steps);
        result.comment_lines.push_back(meta_line(id, frame_kind, axis_name(axis)));
        result.comment_lines.push_back("# n=1000 theta0=" + fmt17(d.theta0) + " start=" +
                                       fmt17(start) + " stop=" + fmt17(stop) +
                                       " steps=" + std::to_string(steps));
        result.columns = {"chi_n_t", "v_x", "v_y"};
        result.rows.assign(steps, {});
        parallel_for(steps, options.threads, [&](int index) {
            const double t = grid[index];
            const double chi_t = axis == Axis::chi_t ? t : t / n;
            const double u = axis == Axis::chi_t ? n * t : t;
            const ModeParams mode{std::sqrt(n), chi_t};
            const detail::SecondOrderCache cache =
                detail::second_order_cache(mode, frame_kind);
            detail::f128 m1, m1y, vx, vy, cov;
            cache.at((detail::f128)frame.theta0, m1, m1y, vx, vy, cov);
            ResultRow row;
            row.cells.push_back(Cell::num(u));
            row.cells.push_back(Cell::num((double)vx));
            row.cells.push_back(Cell::num((double)vy));
            result.rows[index] = std::move(row);
        });
        return result;
    }

    // Figures 6 and 7: N = 1000, balanced splitter, canonical plus optimized.
    const double n = 1000.0;
    const BeamsplitterConfig bs{0.5};
    const std::vector<double> grid = linspace(start, stop, steps);
    result.comment_lines.push_back(meta_line(id, frame_kind, axis_name(axis)));
    result.comment_lines.push_back("# n=1000 eta=0.5 theta0=" + fmt17(d.theta0) +
                                   " start=" + fmt17(start) + " stop=" + fmt17(stop) +
                                   " steps=" + std::to_string(steps));
    if (id == 6)
        result.columns = {"chi_t", "chi_n_t", "ds_plus", "ds_minus", "ds_opt", "theta_opt"};
    else
        result.columns = {"chi_t", "chi_n_t", "reid_canonical", "reid_opt", "theta_opt"};
    result.rows.assign(steps, {});
    parallel_for(steps, options.threads, [&](int index) {
        const double t = grid[index];
        const double chi_t = axis == Axis::chi_t ? t : t / n;
        const double u = axis == Axis::chi_t ? n * t : t;
        const ModeParams mode{std::sqrt(n), chi_t};
        ResultRow row;
        row.cells.push_back(Cell::num(chi_t));
        row.cells.push_back(Cell::num(u));
        if (id == 6) {
            const TwoModeVariances v = output_variances(mode, mode, bs, frame);
            const OptimizeResult opt =
                optimize_angle(mode, mode, bs, Criterion::duan_simon, frame);
            row.cells.push_back(Cell::num(duan_simon(v, +1).value));
            row.cells.push_back(Cell::num(duan_simon(v, -1).value));
            row.cells.push_back(Cell::num(opt.result.value));
            row.cells.push_back(Cell::num(opt.theta_opt));
        } else {
            const TwoModeVariances v = output_variances(mode, mode, bs, frame);
            const OptimizeResult opt =
                optimize_angle(mode, mode, bs, Criterion::reid, frame);
            row.cells.push_back(Cell::num(reid_epr(v, 1).value));
            row.cells.push_back(Cell::num(opt.result.value));
            row.cells.push_back(Cell::num(opt.theta_opt));
        }
        result.rows[index] = std::move(row);
    });
    return result;
}

void write_csv(const SweepResult& result, std::ostream& out) {
    for (const auto& line : result.comment_lines) out << line << "\n";
    for (size_t i = 0; i < result.columns.size(); ++i)
        out << (i ? "," : "") << result.columns[i];
    out << "\n";
    for (const auto& row : result.rows) {
        for (size_t i = 0; i < row.cells.size(); ++i) {
            if (i) out << ",";
            const Cell& c = row.cells[i];
            if (c.is_number)
                out << fmt17(c.number);
            else
                out << c.text;
        }
        out << "\n";
    }
}

void write_json(const SweepResult& result, std::ostream& out) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (size_t i = 0; i < row.cells.size(); ++i) {
            const Cell& c = row.cells[i];
            if (c.is_number)
                obj[result.columns[i]] = c.number;
            else
                obj[result.columns[i]] = c.text;
        }
        rows.push_back(std::move(obj));
    }
    out << rows.dump(1) << "\n";
}

std::string render(const SweepResult& result, Format format) {
    std::ostringstream out;
    if (format == Format::csv)
        write_csv(result, out);
    else
        write_json(result, out);
    return out.str();
}

void reproduce_figure(int id, const std::string& out_path, Format format,
                      const FigureOptions& options) {
    const SweepResult result = figure_result(id, options);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << render(result, format);
    if (!out) throw std::runtime_error("failed writing output file: " + out_path);
}

namespace {

const std::vector<std::string>& formula_families() {
    static const std::vector<std::string> fams = {
        "mean_field",        "operator_moments",        "quadrature_moments",
        "output_variances",  "output_covariances",      "duan_simon",
        "reid_inferred_variances", "output_cumulants"};
    return fams;
}

}  // namespace

OracleCheckReport oracle_check(int max_n, const std::string& mutate) {
    if (max_n < 0) throw std::invalid_argument("oracle_check: max_n must be >= 0");
    if (static_cast<double>(max_n) > oracle::max_oracle_n_bar)
        throw std::invalid_argument(
            "oracle_check: max_n exceeds the oracle photon-number range (200)");
    const auto& fams = formula_families();
    if (!mutate.empty() &&
        std::find(fams.begin(), fams.end(), mutate) == fams.end()) {
        std::string msg = "oracle_check: unknown formula '" + mutate + "'; known formulas:";
        for (const auto& f : fams) msg += " " + f;
        throw std::invalid_argument(msg);
    }
    auto mut = [&](const std::string& family) {
        return family == mutate ? 1.0 + 1e-6 : 1.0;
    };

    std::map<std::string, double> worst;
    for (const auto& f : fams) worst[f] = 0.0;
    auto record = [&](const std::string& family, double analytic, double reference) {
        const double err =
            std::fabs(analytic - reference) / std::max(1.0, std::fabs(reference));
        if (err > worst[family]) worst[family] = err;
    };
    auto record_c = [&](const std::string& family, std::complex<double> analytic,
                        std::complex<double> reference) {
        const double err =
            std::abs(analytic - reference) / std::max(1.0, std::abs(reference));
        if (err > worst[family]) worst[family] = err;
    };

    std::vector<double> n_values{0.0};
    for (double n : {1.0, 4.0, 16.0, 25.0})
        if (n <= static_cast<double>(max_n)) n_values.push_back(n);
    const std::vector<double> chi_ts{1e-3, 1e-2, 1e-1, 0.3};
    const std::vector<double> thetas{0.0, 0.3, M_PI / 2};
    const std::vector<double> etas{0.3, 0.5, 0.7};
    const std::vector<std::pair<int, int>> pqs{{0, 1}, {0, 2}, {1, 1}, {0, 3},
                                               {1, 2}, {0, 4}, {1, 3}, {2, 2}};

    for (double n : n_values) {
        const std::complex<double> alpha = std::polar(std::sqrt(n), 0.4);
        const std::complex<double> alpha2 = std::polar(std::sqrt(n) * 0.8, 0.6);
        for (double chi_t : chi_ts) {
            const ModeParams mode1{alpha, chi_t};
            const ModeParams mode2{alpha2, chi_t * 0.7};
            const oracle::FockVector psi1 =
                oracle::evolve_kerr(oracle::coherent_fock(alpha), chi_t);

            record_c("mean_field", mut("mean_field") * kerr_moment(mode1, 0, 1),
                     oracle::oracle_moment(psi1, 0, 1));
            for (const auto& [p, q] : pqs)
                record_c("operator_moments",
                         mut("operator_moments") * kerr_moment(mode1, p, q),
                         oracle::oracle_moment(psi1, p, q));

            for (double theta : thetas) {
                const FrameSpec frame{Frame::lab, theta};
                const QuadratureMoments qa = quadrature_moments(mode1, frame);
                const QuadratureMoments qo = oracle::oracle_quadrature_moments(psi1, theta);
                const double mq = mut("quadrature_moments");
                record("quadrature_moments", mq * qa.m1, qo.m1);
                record("quadrature_moments", mq * qa.m2, qo.m2);
                record("quadrature_moments", mq * qa.m3, qo.m3);
                record("quadrature_moments", mq * qa.m4, qo.m4);
                record("quadrature_moments", mq * qa.cov_xy, qo.cov_xy);

                for (double eta : etas) {
                    const BeamsplitterConfig bs{eta};
                    const TwoModeVariances va = output_variances(mode1, mode2, bs, frame);
                    const oracle::OracleTwoMode ot =
                        oracle::oracle_two_mode(mode1, mode2, bs, theta);
                    const TwoModeVariances& vo = ot.variances;
                    const double mv = mut("output_variances");
                    record("output_variances", mv * va.v_x1, vo.v_x1);
                    record("output_variances", mv * va.v_x2, vo.v_x2);
                    record("output_variances", mv * va.v_y1, vo.v_y1);
                    record("output_variances", mv * va.v_y2, vo.v_y2);
                    const double mc = mut("output_covariances");
                    record("output_covariances", mc * va.c_x1x2, vo.c_x1x2);
                    record("output_covariances", mc * va.c_y1y2, vo.c_y1y2);
                    const double md = mut("duan_simon");
                    record("duan_simon", md * duan_simon(va, +1).value,
                           duan_simon(vo, +1).value);
                    record("duan_simon", md * duan_simon(va, -1).value,
                           duan_simon(vo, -1).value);
                    const double mr = mut("reid_inferred_variances");
                    record("reid_inferred_variances", mr * reid_epr(va, 1).value,
                           reid_epr(vo, 1).value);
                    record("reid_inferred_variances", mr * reid_epr(va, 2).value,
                           reid_epr(vo, 2).value);
                    if (eta == 0.5) {
                        const OutputCumulants oc =
                            output_cumulants(mode1, mode2, bs, frame);
                        const double mo = mut("output_cumulants");
                        record("output_cumulants", mo * oc.kappa3_x1, ot.kappa3_x1);
                        record("output_cumulants", mo * oc.kappa4_x1_std, ot.kappa4_x1_std);
                        record("output_cumulants", mo * oc.mean_x1, ot.mean_x1);
                    }
                }
            }
        }
    }

    const double tolerance = 1e-9;
    OracleCheckReport report;
    std::ostringstream text;
    text << "oracle equivalence check: max_n=" << max_n;
    if (!mutate.empty()) text << " (mutated formula: " << mutate << ")";
    text << "\n";
    for (const auto& f : fams) {
        OracleCheckEntry entry;
        entry.formula = f;
        entry.worst_rel = worst[f];
        entry.pass = worst[f] <= tolerance;
        report.entries.push_back(entry);
        if (!entry.pass) report.pass = false;
        char buf[128];
        std::snprintf(buf, sizeof buf, "  %-26s worst rel %.3e  %s\n", f.c_str(),
                      entry.worst_rel, entry.pass ? "PASS" : "FAIL");
        text << buf;
    }
    text << (report.pass ? "OVERALL PASS" : "OVERALL FAIL") << " (tolerance "
         << tolerance << ")\n";
    report.text = text.str();
    return report;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> values;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            values[trim(line)] = "true";
        } else {
            const std::string key = trim(line.substr(0, eq));
            if (key.empty())
                throw std::invalid_argument("config file: empty key in line: " + line);
            values[key] = trim(line.substr(eq + 1));
        }
    }
    return values;
}

}
