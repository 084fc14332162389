#pragma once

#include "fraclab/config.hpp"
#include "fraclab/inequalities.hpp"
#include "fraclab/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fraclab {

// One recorded run assertion: passes when measured <= bound.
struct Assertion {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct TraceRow {
    std::string zeta;
    double t = 0.0;
    double difference = 0.0;
};

struct CutoffRow {
    int k = 0;
    double l2_one_minus_xi = 0.0;
    double l2_grad_xi = 0.0;
};

// Everything a completed scenario reports. The wall clock is printed by
// the CLI but never written into artifacts, which stay byte-deterministic
// for a fixed configuration.
struct RunSummary {
    RunConfig config;
    DiagnosticsRecord initial_record;
    DiagnosticsRecord final_record;
    InequalityReport inequalities;
    std::vector<Assertion> assertions;

    std::vector<std::string> gamma_names;
    std::vector<double> decay_taus;
    std::vector<std::vector<double>> decay_abs; // [tau][gamma]

    std::vector<std::pair<std::string, double>> residuals; // phi -> value
    std::vector<TraceRow> trace;
    std::vector<CutoffRow> cutoff_rows;

    double wall_seconds = 0.0;

    bool all_pass() const;
};

// Runs the full pipeline and writes the artifact set into out_dir
// (created if needed): diagnostics.csv, snapshot_NNNN.csv, eigenvalues.csv,
// inequalities.json, decay.csv, residuals.csv, initial_trace.csv,
// cutoffs.csv, summary.json. On failure the partial outputs remain and a
// FAILED marker file holds the error text before the exception propagates.
RunSummary run_scenario(const RunConfig& config, const std::string& out_dir);

// Pairwise comparison of completed run directories sharing grid, horizon
// and initial data (read back from their artifacts).
struct ComparisonPair {
    std::string run_a;
    std::string run_b;
    double l2_space_time = 0.0;
    double final_mass_delta = 0.0;
    double final_linf_delta = 0.0;
};

struct ComparisonTable {
    std::vector<std::string> runs; // ordered by (delta, mu) descending
    std::vector<double> deltas;
    std::vector<double> mus;
    std::vector<double> mass_drifts; // |mass(T) - mass(0)| per run
    std::vector<ComparisonPair> pairs; // consecutive pairs first, then rest
    bool consecutive_l2_decreasing = false;
    bool mass_drift_decreasing = false;

    std::string to_json() const;
};

ComparisonTable compare_runs(const std::vector<std::string>& run_dirs);

// Continuation driver: reruns the base configuration at each (delta, mu)
// pair into out_dir/run_NN, compares the completed runs, and writes
// continuation_report.json into out_dir.
struct ContinuationResult {
    std::vector<RunSummary> summaries;
    ComparisonTable table;

    bool all_pass() const;
};

ContinuationResult run_continuation(const RunConfig& base,
                                    const std::vector<double>& deltas,
                                    const std::vector<double>& mus,
                                    const std::string& out_dir);

} // namespace fraclab
