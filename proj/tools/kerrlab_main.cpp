#include "kerrlab/cumulants.hpp"
#include "kerrlab/fock_oracle.hpp"
#include "kerrlab/kerr_moments.hpp"
#include "kerrlab/sweep.hpp"
#include "kerrlab/two_mode.hpp"
#include "kerrlab/version.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace kerrlab;

// All user-facing values arrive as strings (command line and config file share
// one representation); typed conversion happens in one place with the flag
// name in the error message.
struct Opts {
    std::string n_photons;
    bool axis_chi_t = false, axis_chi_n_t = false;  // sweep/figure axis choice
    std::string chi_t, chi_n_t;                     // optimize point values
    std::string start, stop, steps;
    std::string eta, theta0;
    std::string frame, kappa4, format, output;
    std::string quantities, criterion, reid_mode, threads;
    std::string max_n, mutate, report;
    std::string config;
    bool optimize_angle = false;
    bool independent = false;
    int figure_id = 0;
};

double to_double(const std::string& name, const std::string& s) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(name + ": not a number: '" + s + "'");
    }
}

int to_int(const std::string& name, const std::string& s) {
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(name + ": not an integer: '" + s + "'");
    }
}

bool to_bool(const std::string& name, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument(name + ": not a boolean: '" + s + "'");
}

double opt_double(const std::string& name, const std::string& s, double fallback) {
    return s.empty() ? fallback : to_double(name, s);
}

int opt_int(const std::string& name, const std::string& s, int fallback) {
    return s.empty() ? fallback : to_int(name, s);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        const auto b = item.find_last_not_of(" \t");
        parts.push_back(item.substr(a, b - a + 1));
    }
    return parts;
}

std::vector<double> parse_photon_list(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("--n-photons is required");
    std::vector<double> values;
    for (const auto& part : split_commas(s)) values.push_back(to_double("--n-photons", part));
    if (values.empty()) throw std::invalid_argument("--n-photons: empty list");
    return values;
}

Frame parse_frame(const std::string& s) {
    if (s == "lab") return Frame::lab;
    if (s == "rotating") return Frame::rotating;
    throw std::invalid_argument("--frame: expected 'lab' or 'rotating', got '" + s + "'");
}

sweep::Kappa4Variant parse_kappa4(const std::string& s) {
    if (s == "paper") return sweep::Kappa4Variant::paper;
    if (s == "standard") return sweep::Kappa4Variant::standard;
    if (s == "both") return sweep::Kappa4Variant::both;
    throw std::invalid_argument("--kappa4: expected paper|standard|both, got '" + s + "'");
}

sweep::Format parse_format(const std::string& s) {
    if (s == "csv") return sweep::Format::csv;
    if (s == "json") return sweep::Format::json;
    throw std::invalid_argument("--format: expected csv|json, got '" + s + "'");
}

std::vector<sweep::Quantity> parse_quantities(const std::string& s) {
    std::vector<sweep::Quantity> out;
    for (const auto& name : split_commas(s)) {
        if (name == "moments")
            out.push_back(sweep::Quantity::moments);
        else if (name == "cumulants")
            out.push_back(sweep::Quantity::cumulants);
        else if (name == "variance")
            out.push_back(sweep::Quantity::variance);
        else if (name == "duan-simon" || name == "duan_simon")
            out.push_back(sweep::Quantity::duan_simon);
        else if (name == "reid")
            out.push_back(sweep::Quantity::reid);
        else if (name == "asymptotics")
            out.push_back(sweep::Quantity::asymptotics);
        else
            throw std::invalid_argument("--quantities: unknown quantity '" + name + "'");
    }
    return out;
}

Criterion parse_criterion(const std::string& s) {
    if (s == "duan-simon" || s == "duan_simon" || s == "ds") return Criterion::duan_simon;
    if (s == "reid") return Criterion::reid;
    throw std::invalid_argument("--criterion: expected duan-simon|reid, got '" + s + "'");
}

// Config keys are the long option names without the leading dashes. Values
// seed the option defaults before command-line parsing, so explicit flags
// always win.
void apply_config(const std::string& sub, const std::string& key,
                  const std::string& value, Opts& o) {
    if (key == "n-photons") {
        o.n_photons = value;
    } else if (key == "chi-t") {
        if (sub == "optimize")
            o.chi_t = value;
        else
            o.axis_chi_t = to_bool("chi-t", value);
    } else if (key == "chi-n-t") {
        if (sub == "optimize")
            o.chi_n_t = value;
        else
            o.axis_chi_n_t = to_bool("chi-n-t", value);
    } else if (key == "start") {
        o.start = value;
    } else if (key == "stop") {
        o.stop = value;
    } else if (key == "steps") {
        o.steps = value;
    } else if (key == "eta") {
        o.eta = value;
    } else if (key == "theta0") {
        o.theta0 = value;
    } else if (key == "frame") {
        o.frame = value;
    } else if (key == "kappa4") {
        o.kappa4 = value;
    } else if (key == "format") {
        o.format = value;
    } else if (key == "output") {
        o.output = value;
    } else if (key == "quantities") {
        o.quantities = value;
    } else if (key == "criterion") {
        o.criterion = value;
    } else if (key == "reid-mode") {
        o.reid_mode = value;
    } else if (key == "threads") {
        o.threads = value;
    } else if (key == "max-n") {
        o.max_n = value;
    } else if (key == "mutate") {
        o.mutate = value;
    } else if (key == "report") {
        o.report = value;
    } else if (key == "optimize-angle") {
        o.optimize_angle = to_bool("optimize-angle", value);
    } else if (key == "independent-angles") {
        o.independent = to_bool("independent-angles", value);
    } else {
        throw std::invalid_argument("config file: unknown key '" + key + "'");
    }
}

void emit(const sweep::SweepResult& result, const std::string& output,
          sweep::Format format) {
    const std::string text = sweep::render(result, format);
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + output);
    out << text;
}

int run_sweep_command(const Opts& o) {
    if (o.axis_chi_t && o.axis_chi_n_t)
        throw std::invalid_argument("choose one of --chi-t / --chi-n-t, not both");
    sweep::SweepSpec spec;
    spec.n_photons = parse_photon_list(o.n_photons);
    spec.axis = o.axis_chi_n_t ? sweep::Axis::chi_n_t : sweep::Axis::chi_t;
    spec.start = opt_double("--start", o.start, 0.0);
    spec.stop = opt_double("--stop", o.stop, 1.0);
    spec.steps = opt_int("--steps", o.steps, 101);
    spec.eta = opt_double("--eta", o.eta, 0.5);
    spec.frame = FrameSpec{parse_frame(o.frame.empty() ? "lab" : o.frame),
                           opt_double("--theta0", o.theta0, 0.0)};
    spec.optimize = o.optimize_angle;
    spec.quantities = parse_quantities(o.quantities.empty() ? "variance,cumulants"
                                                            : o.quantities);
    spec.kappa4 = parse_kappa4(o.kappa4.empty() ? "both" : o.kappa4);
    spec.threads = opt_int("--threads", o.threads, 0);
    emit(sweep::run_sweep(spec), o.output, parse_format(o.format.empty() ? "csv" : o.format));
    return 0;
}

int run_figure_command(const Opts& o) {
    if (o.axis_chi_t && o.axis_chi_n_t)
        throw std::invalid_argument("choose one of --chi-t / --chi-n-t, not both");
    sweep::FigureOptions fo;
    if (!o.frame.empty()) fo.frame = parse_frame(o.frame);
    if (o.axis_chi_t) fo.axis = sweep::Axis::chi_t;
    if (o.axis_chi_n_t) fo.axis = sweep::Axis::chi_n_t;
    if (!o.start.empty()) fo.start = to_double("--start", o.start);
    if (!o.stop.empty()) fo.stop = to_double("--stop", o.stop);
    if (!o.steps.empty()) fo.steps = to_int("--steps", o.steps);
    fo.kappa4 = parse_kappa4(o.kappa4.empty() ? "paper" : o.kappa4);
    fo.threads = opt_int("--threads", o.threads, 0);
    const sweep::Format format = parse_format(o.format.empty() ? "csv" : o.format);
    std::string path = o.output;
    if (path.empty())
        path = "figure" + std::to_string(o.figure_id) +
               (format == sweep::Format::csv ? ".csv" : ".json");
    sweep::reproduce_figure(o.figure_id, path, format, fo);
    std::cout << "figure " << o.figure_id << " -> " << path << "\n";
    return 0;
}

int run_oracle_check_command(const Opts& o) {
    const int max_n = opt_int("--max-n", o.max_n, 16);
    const sweep::OracleCheckReport report = sweep::oracle_check(max_n, o.mutate);
    std::cout << report.text;
    if (!o.report.empty()) {
        std::ofstream out(o.report, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open report file: " + o.report);
        out << report.text;
    }
    return report.pass ? 0 : 1;
}

int run_optimize_command(const Opts& o) {
    const std::vector<double> ns = parse_photon_list(o.n_photons);
    if (ns.size() != 1)
        throw std::invalid_argument("optimize: --n-photons takes exactly one value");
    const double n = ns[0];
    if (!(n > 0)) throw std::invalid_argument("--n-photons: N must be > 0");
    if (o.chi_t.empty() == o.chi_n_t.empty())
        throw std::invalid_argument("optimize: give exactly one of --chi-t / --chi-n-t");
    const double chi_t = o.chi_t.empty() ? to_double("--chi-n-t", o.chi_n_t) / n
                                         : to_double("--chi-t", o.chi_t);
    const BeamsplitterConfig bs{opt_double("--eta", o.eta, 0.5)};
    const FrameSpec frame{parse_frame(o.frame.empty() ? "lab" : o.frame),
                          opt_double("--theta0", o.theta0, 0.0)};
    const Criterion criterion =
        parse_criterion(o.criterion.empty() ? "duan-simon" : o.criterion);
    const int reid_mode = opt_int("--reid-mode", o.reid_mode, 1);
    const ModeParams mode{std::sqrt(n), chi_t};

    const OptimizeResult opt = optimize_angle(mode, mode, bs, criterion, frame, reid_mode);

    sweep::SweepResult table;
    table.comment_lines.push_back(
        std::string("# kerrlab v") + version + " figure=none frame=" +
        (frame.kind == Frame::lab ? "lab" : "rotating") + " axis=chi_t");
    table.columns = {"n",     "chi_t",     "chi_n_t", "eta",      "theta0",
                     "frame", "criterion", "theta_opt", "value",  "threshold",
                     "violated"};
    sweep::ResultRow row;
    row.cells.push_back(sweep::Cell::num(n));
    row.cells.push_back(sweep::Cell::num(chi_t));
    row.cells.push_back(sweep::Cell::num(n * chi_t));
    row.cells.push_back(sweep::Cell::num(bs.eta));
    row.cells.push_back(sweep::Cell::num(frame.theta0));
    row.cells.push_back(sweep::Cell::str(frame.kind == Frame::lab ? "lab" : "rotating"));
    row.cells.push_back(sweep::Cell::str(criterion == Criterion::duan_simon
                                             ? "duan-simon"
                                             : "reid"));
    row.cells.push_back(sweep::Cell::num(opt.theta_opt));
    row.cells.push_back(sweep::Cell::num(opt.result.value));
    row.cells.push_back(sweep::Cell::num(opt.result.threshold));
    row.cells.push_back(sweep::Cell::num(opt.result.violated ? 1.0 : 0.0));
    if (criterion == Criterion::duan_simon) {
        table.columns.push_back("sign_choice");
        row.cells.push_back(sweep::Cell::num(opt.result.sign_choice.value_or(0)));
    }
    if (o.independent) {
        const IndependentAngleResult ind =
            optimize_angles_independent(mode, mode, bs, criterion, frame, reid_mode);
        table.columns.insert(table.columns.end(),
                             {"theta1_independent", "theta2_independent",
                              "value_independent"});
        row.cells.push_back(sweep::Cell::num(ind.theta1));
        row.cells.push_back(sweep::Cell::num(ind.theta2));
        row.cells.push_back(sweep::Cell::num(ind.result.value));
    }
    table.rows.push_back(std::move(row));
    emit(table, o.output, parse_format(o.format.empty() ? "csv" : o.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kerrlab: closed-form quadrature statistics and entanglement criteria "
                 "of Kerr-squeezed light, with a truncated-Fock oracle"};
    app.set_version_flag("--version", std::string("kerrlab v") + version);
    app.require_subcommand(1);

    Opts o;

    // Seed option defaults from the config file before parsing, so that
    // explicitly supplied flags take precedence.
    std::string config_path;
    std::string sub_name = argc > 1 ? argv[1] : "";
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc)
            config_path = argv[i + 1];
        else if (a.rfind("--config=", 0) == 0)
            config_path = a.substr(9);
    }
    try {
        if (!config_path.empty())
            for (const auto& [key, value] : sweep::parse_config_file(config_path))
                apply_config(sub_name, key, value, o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over a time grid");
    sweep_cmd->add_option("--n-photons", o.n_photons,
                          "Comma-separated mean photon numbers");
    sweep_cmd->add_flag("--chi-t", o.axis_chi_t, "Sweep axis is chi*t (default)");
    sweep_cmd->add_flag("--chi-n-t", o.axis_chi_n_t, "Sweep axis is chi*N*t");
    sweep_cmd->add_option("--start", o.start, "Axis start (default 0)");
    sweep_cmd->add_option("--stop", o.stop, "Axis stop (default 1)");
    sweep_cmd->add_option("--steps", o.steps, "Grid points, >= 2 (default 101)");
    sweep_cmd->add_option("--eta", o.eta, "Beamsplitter reflectivity (default 0.5)");
    sweep_cmd->add_option("--theta0", o.theta0, "Analysis angle in radians (default 0)");
    sweep_cmd->add_option("--frame", o.frame, "lab|rotating (default lab)");
    sweep_cmd->add_flag("--optimize-angle", o.optimize_angle,
                        "Add angle-optimized criterion columns");
    sweep_cmd->add_option("--quantities", o.quantities,
                          "Comma list of moments,cumulants,variance,duan-simon,reid,"
                          "asymptotics (default variance,cumulants)");
    sweep_cmd->add_option("--kappa4", o.kappa4, "paper|standard|both (default both)");
    sweep_cmd->add_option("--threads", o.threads, "Worker threads, 0 = auto");
    sweep_cmd->add_option("--output", o.output, "Output path (default stdout)");
    sweep_cmd->add_option("--format", o.format, "csv|json (default csv)");
    sweep_cmd->add_option("--config", o.config, "Key=value config file");

    CLI::App* figure_cmd =
        app.add_subcommand("figure", "Reproduce one figure's data file");
    figure_cmd->add_option("id", o.figure_id, "Figure id (1..7)")->required();
    figure_cmd->add_flag("--chi-t", o.axis_chi_t, "Time axis in chi*t units");
    figure_cmd->add_flag("--chi-n-t", o.axis_chi_n_t, "Time axis in chi*N*t units");
    figure_cmd->add_option("--start", o.start, "Axis start override");
    figure_cmd->add_option("--stop", o.stop, "Axis stop override");
    figure_cmd->add_option("--steps", o.steps, "Grid points override");
    figure_cmd->add_option("--frame", o.frame, "Frame override: lab|rotating");
    figure_cmd->add_option("--kappa4", o.kappa4, "paper|standard|both (default paper)");
    figure_cmd->add_option("--threads", o.threads, "Worker threads, 0 = auto");
    figure_cmd->add_option("--output", o.output, "Output path (default figure<id>.<ext>)");
    figure_cmd->add_option("--format", o.format, "csv|json (default csv)");
    figure_cmd->add_option("--config", o.config, "Key=value config file");

    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle-check", "Analytic-vs-oracle equivalence suite (exit 1 on breach)");
    oracle_cmd->add_option("--max-n", o.max_n, "Largest mean photon number (default 16)");
    oracle_cmd->add_option("--mutate", o.mutate,
                           "Deliberately corrupt one formula family (negative control)");
    oracle_cmd->add_option("--report", o.report, "Also write the report to this path");
    oracle_cmd->add_option("--config", o.config, "Key=value config file");

    CLI::App* optimize_cmd = app.add_subcommand(
        "optimize", "Angle-optimize a criterion at one parameter point");
    optimize_cmd->add_option("--n-photons", o.n_photons, "Mean photon number (one value)");
    optimize_cmd->add_option("--chi-t", o.chi_t, "Interaction angle chi*t");
    optimize_cmd->add_option("--chi-n-t", o.chi_n_t, "Interaction angle chi*N*t");
    optimize_cmd->add_option("--eta", o.eta, "Beamsplitter reflectivity (default 0.5)");
    optimize_cmd->add_option("--theta0", o.theta0, "Canonical angle (default 0)");
    optimize_cmd->add_option("--frame", o.frame, "lab|rotating (default lab)");
    optimize_cmd->add_option("--criterion", o.criterion, "duan-simon|reid");
    optimize_cmd->add_option("--reid-mode", o.reid_mode, "Inferred mode 1|2 (default 1)");
    optimize_cmd->add_flag("--independent-angles", o.independent,
                           "Also search separate angles per output");
    optimize_cmd->add_option("--output", o.output, "Output path (default stdout)");
    optimize_cmd->add_option("--format", o.format, "csv|json (default csv)");
    optimize_cmd->add_option("--config", o.config, "Key=value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep_cmd->parsed()) return run_sweep_command(o);
        if (figure_cmd->parsed()) return run_figure_command(o);
        if (oracle_cmd->parsed()) return run_oracle_check_command(o);
        if (optimize_cmd->parsed()) return run_optimize_command(o);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
