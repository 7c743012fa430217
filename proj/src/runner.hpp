#ifndef VSEL_RUNNER_HPP
#define VSEL_RUNNER_HPP

#include "config.hpp"
#include "ensemble.hpp"
#include "qsim.hpp"

#include <string>
#include <vector>

namespace vsel {

// One efficiency-curve CSV row.  eta_analytic is the exact-quadrature
// efficiency evaluated at the configured spatial lower limit x_D; eta_engine
// is whatever the selected engine measured.
struct ReportRow {
    double u0 = 0.0;
    double u_eff = 0.0;
    double t_eff = 0.0;
    double eta_analytic = 0.0;
    double eta_engine = 0.0;
    double stderr_eta = 0.0;  // binomial, classical engines; 0 otherwise
    double x_localmin = 0.0;
};

struct RunResult {
    std::vector<ReportRow> rows;
    std::vector<std::string> files;  // everything written, curve.csv first
    double wall_seconds = 0.0;
};

// Executes the configured engine over the U0 list and writes into out_dir:
//   curve.csv      U0_nK,U_eff_nK,T_eff_nK,eta_analytic,eta_engine,stderr,x_min_um
//   manifest.txt   reparseable config echo plus version and wall time
//   density/spectrum snapshot text files for quantum runs
// Partial outputs are removed when an engine aborts.  Identical (config, seed)
// produce identical CSV bytes in serial mode.
RunResult run(const RunConfig& cfg, const std::string& out_dir);

struct CompareResult {
    std::vector<ReportRow> classical_rows;
    std::vector<ReportRow> quantum_rows;
    double max_abs_diff = 0.0;   // between the two engines' eta columns
    double mean_abs_diff = 0.0;
    std::vector<std::string> files;
};

// Runs the classical engine (dynamic unless the config says
// classical-quasistatic) and the quantum engine over the same U0 list, writes
// compare.csv plus a divergence summary.
CompareResult compare_engines(const RunConfig& cfg, const std::string& out_dir);

// Per-row sweep schedule with the auto rules resolved: speed defaults to
// 0.1 v_c(U_eff), dt to the engine's step heuristic, hold to 5 well periods.
SweepSchedule make_schedule(const RunConfig& cfg, const WellAnalysis& well, bool classical);

// Barrier rest position used for well analysis and final-state evaluation:
// x_end when a sweep is configured, otherwise a clean +x-side position.
double final_barrier_position(const RunConfig& cfg);

std::string version_string();

} // namespace vsel

#endif
