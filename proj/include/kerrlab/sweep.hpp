#pragma once

#include "kerrlab/kerr_moments.hpp"
#include "kerrlab/two_mode.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kerrlab::sweep {

enum class Axis { chi_t, chi_n_t };

enum class Quantity { moments, cumulants, variance, duan_simon, reid, asymptotics };

enum class Kappa4Variant { paper, standard, both };

enum class Format { csv, json };

// Parameter grid for one sweep. Entanglement quantities mix two identical
// copies of the swept mode on the beamsplitter.
struct SweepSpec {
    std::vector<double> n_photons;
    Axis axis = Axis::chi_t;
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;
    double eta = 0.5;
    FrameSpec frame{};
    bool optimize = false;
    std::vector<Quantity> quantities{Quantity::variance, Quantity::cumulants};
    Kappa4Variant kappa4 = Kappa4Variant::both;
    int threads = 0;  // 0 = hardware concurrency

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// One table cell: numeric or provenance text.
struct Cell {
    bool is_number = true;
    double number = 0.0;
    std::string text;

    static Cell num(double v) { return Cell{true, v, {}}; }
    static Cell str(std::string s) { return Cell{false, 0.0, std::move(s)}; }
};

struct ResultRow {
    std::vector<Cell> cells;
};

// Materialized table: comment header lines (CSV only), column names, and
// rows in canonical order (N-major, then the time axis ascending).
struct SweepResult {
    std::vector<std::string> comment_lines;
    std::vector<std::string> columns;
    std::vector<ResultRow> rows;
};

SweepResult run_sweep(const SweepSpec& spec);

// Optional overrides for a figure reproduction; anything unset keeps the
// figure's documented defaults.
struct FigureOptions {
    std::optional<Frame> frame;
    std::optional<Axis> axis;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<int> steps;
    Kappa4Variant kappa4 = Kappa4Variant::paper;
    int threads = 0;
};

// Data behind figure id (1..7); throws std::invalid_argument for other ids.
//  1: kappa3 of rotating-frame Y, scaled by sqrt(N), vs chi_n_t, with the
//     cubic large-N closed form alongside (N = 100, 1e3, 1e4, 1e6).
//  2: kappa4 (both variants) of rotating-frame Y, scaled by N, vs chi_n_t,
//     with the number-state reference.
//  3: kappa3 of rotating-frame Y vs N at chi_n_t = 25.
//  4: kappa4 vs N at chi_n_t = 25 with the number-state reference -6N(N+1).
//  5: canonical lab-frame variances v_x, v_y vs chi_n_t at N = 1000.
//  6: both sum-criterion branches plus the angle-optimized curve vs chi_t
//     (N = 1000, eta = 1/2).
//  7: canonical and angle-optimized inferred-variance products vs chi_t.
SweepResult figure_result(int id, const FigureOptions& options = {});

void write_csv(const SweepResult& result, std::ostream& out);
void write_json(const SweepResult& result, std::ostream& out);
std::string render(const SweepResult& result, Format format);

// Renders figure data to a file. CSV carries the metadata comment header;
// JSON mirrors the rows as an array of objects with identical keys.
void reproduce_figure(int id, const std::string& out_path, Format format = Format::csv,
                      const FigureOptions& options = {});

struct OracleCheckEntry {
    std::string formula;
    double worst_rel = 0.0;
    bool pass = true;
};

struct OracleCheckReport {
    bool pass = true;
    std::vector<OracleCheckEntry> entries;
    std::string text;
};

// Full analytic-vs-oracle equivalence matrix up to photon number max_n,
// reporting the worst relative error per closed-form formula family.
// `mutate` names a formula to corrupt deliberately (negative control for the
// check itself); empty means no mutation. Tolerance: 1e-9 relative.
OracleCheckReport oracle_check(int max_n, const std::string& mutate = "");

// Key=value config-file support for the CLI (one flag per line, '#' comments;
// keys are the long option names without dashes). Flags given on the command
// line take precedence over config values.
std::map<std::string, std::string> parse_config_file(const std::string& path);

}
