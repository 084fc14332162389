#include "fraclab/scenario.hpp"

#include "fraclab/deformation.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/levelset.hpp"
#include "fraclab/probes.hpp"
#include "fraclab/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace fraclab {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot open output file '" + path.string() + "'");
    return out;
}

ordered_json record_json(const DiagnosticsRecord& r) {
    ordered_json j;
    j["t"] = r.t;
    j["mass"] = r.mass;
    j["linf"] = r.linf;
    j["min"] = r.min;
    j["entropy"] = r.entropy;
    j["frac_energy"] = r.frac_energy;
    j["visc_dissip"] = r.visc_dissip;
    j["h_dissip"] = r.h_dissip;
    j["k_dissip"] = r.k_dissip;
    j["boundary_flux_cum"] = r.boundary_flux_cum;
    return j;
}

std::vector<double> snapshot_times(double snapshot_dt, double t_end) {
    std::vector<double> ts = {0.0};
    for (int m = 1;; ++m) {
        const double t = m * snapshot_dt;
        if (t >= t_end * (1.0 - 1e-12)) break;
        ts.push_back(t);
    }
    ts.push_back(t_end);
    return ts;
}

void write_snapshot(const std::filesystem::path& path, const Grid& grid,
                    const std::vector<double>& u) {
    std::ofstream out = open_out(path);
    out << (grid.dim == 2 ? "x,y,u\n" : "x,u\n");
    for (int i = 0; i < grid.cells; ++i) {
        out << fmt(grid.node_x(i));
        if (grid.dim == 2) out << ',' << fmt(grid.node_y(i));
        out << ',' << fmt(u[static_cast<std::size_t>(i)]) << '\n';
    }
}

Assertion make_assertion(const std::string& name, double measured,
                         double bound) {
    return Assertion{name, measured, bound, measured <= bound};
}

// Reconstructs the per-interval energy-ledger residuals from consecutive
// diagnostics records; with one record per step this reproduces the step
// audit exactly (rates are post-state rates).
void ledger_assertions(const Trajectory& traj, const SolverParams& params,
                       double lambda_lo, std::vector<Assertion>& out) {
    double worst_entropy = -1e300;
    double worst_frac = -1e300;
    for (std::size_t k = 1; k < traj.diagnostics.size(); ++k) {
        const DiagnosticsRecord& a = traj.diagnostics[k - 1];
        const DiagnosticsRecord& b = traj.diagnostics[k];
        const double dt = b.t - a.t;
        const double r_entropy = (b.entropy - a.entropy) +
                                 dt * lambda_lo * (b.visc_dissip + b.h_dissip);
        const double r_frac =
            (b.frac_energy - a.frac_energy) +
            dt * lambda_lo * (params.delta * b.h_dissip + b.k_dissip);
        worst_entropy =
            std::max(worst_entropy, r_entropy - params.energy_slack_coeff * dt);
        worst_frac =
            std::max(worst_frac, r_frac - params.energy_slack_coeff * dt);
    }
    if (traj.diagnostics.size() < 2) {
        worst_entropy = 0.0;
        worst_frac = 0.0;
    }
    out.push_back(make_assertion("entropy_ledger", worst_entropy,
                                 params.energy_slack_abs));
    out.push_back(make_assertion("fractional_energy_ledger", worst_frac,
                                 params.energy_slack_abs));
}

} // namespace

bool RunSummary::all_pass() const {
    for (const Assertion& a : assertions)
        if (!a.pass) return false;
    return inequalities.all_pass();
}

RunSummary run_scenario(const RunConfig& config, const std::string& out_dir) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    try {
        RunSummary summary;
        summary.config = config;
        summary.config.output_dir = out_dir;

        const Grid grid = config.make_grid();
        const CoefficientField coeff =
            sample_coefficient(grid, config.make_coefficient());
        const EllipticOperator op = assemble_elliptic(grid, coeff);
        const SpectralDecomposition dec = eigendecompose(op);

        {
            std::ofstream out = open_out(dir / "eigenvalues.csv");
            out << "k,lambda\n";
            for (int k = 0; k < dec.n; ++k)
                out << (k + 1) << ',' << fmt(dec.values[static_cast<std::size_t>(k)])
                    << '\n';
        }

        summary.inequalities =
            check_inequalities(op, dec, config.s, config.inequality_probes,
                               config.probe_seed);
        {
            std::ofstream out = open_out(dir / "inequalities.json");
            out << summary.inequalities.to_json();
        }

        const std::vector<double> u0 =
            prepare_initial(op, config.make_initial(), config.delta);
        const SolverParams params = config.make_solver_params();
        const DegenerateSolver solver(op, dec, params);
        SolverState state = solver.make_state(u0);

        Trajectory traj;
        {
            std::ofstream out = open_out(dir / "diagnostics.csv");
            out << DiagnosticsRecord::csv_header() << '\n';
            solver.run(state, [&](const SolverState& st,
                                  const DiagnosticsRecord& rec) {
                traj.times.push_back(st.t);
                traj.states.push_back(st.u);
                traj.diagnostics.push_back(rec);
                out << rec.csv_row() << '\n';
            });
        }
        summary.initial_record = traj.diagnostics.front();
        summary.final_record = traj.diagnostics.back();

        const std::vector<double> snap_ts =
            snapshot_times(config.snapshot_dt, config.t_end);
        ordered_json snap_list = ordered_json::array();
        for (std::size_t m = 0; m < snap_ts.size(); ++m) {
            char name[40];
            std::snprintf(name, sizeof name, "snapshot_%04d.csv",
                          static_cast<int>(m));
            write_snapshot(dir / name, grid, traj.interpolate(snap_ts[m]));
            snap_list.push_back({{"file", name}, {"t", snap_ts[m]}});
        }

        // Boundary probes: shell flux decay, weak residuals, initial
        // trace, cutoff norms.
        const Deformation def =
            build_deformation(grid, config.epsilon, config.taus);
        const std::vector<SpaceTimeTest> gammas =
            builtin_flux_weights(grid, config.t_end);
        summary.decay_taus = config.taus;
        for (const SpaceTimeTest& g : gammas)
            summary.gamma_names.push_back(g.name);
        for (double tau : config.taus) {
            std::vector<double> row;
            for (const SpaceTimeTest& g : gammas)
                row.push_back(std::fabs(shell_flux(traj, solver, def, tau, g)));
            summary.decay_abs.push_back(std::move(row));
        }
        {
            std::ofstream out = open_out(dir / "decay.csv");
            out << "tau";
            for (const std::string& g : summary.gamma_names)
                out << ",J_abs_" << g;
            out << '\n';
            for (std::size_t r = 0; r < summary.decay_taus.size(); ++r) {
                out << fmt(summary.decay_taus[r]);
                for (double v : summary.decay_abs[r]) out << ',' << fmt(v);
                out << '\n';
            }
        }

        const std::vector<SpaceTimeTest> phis =
            builtin_weak_tests(grid, config.t_end);
        for (const SpaceTimeTest& phi : phis)
            summary.residuals.emplace_back(phi.name,
                                           weak_residual(traj, solver, phi));
        {
            std::ofstream out = open_out(dir / "residuals.csv");
            out << "phi,n,dt,residual\n";
            for (const auto& [name, value] : summary.residuals)
                out << name << ',' << config.nx << ',' << fmt(config.dt_max)
                    << ',' << fmt(value) << '\n';
        }

        std::vector<double> trace_ts;
        for (double factor : {16.0, 8.0, 4.0, 2.0, 1.0}) {
            const double t = factor * config.dt_max;
            if (t <= config.t_end && (trace_ts.empty() || t < trace_ts.back()))
                trace_ts.push_back(t);
        }
        const std::vector<SpatialWeight> zetas = builtin_trace_weights(grid);
        for (const SpatialWeight& z : zetas) {
            const std::vector<double> diffs =
                initial_trace_check(traj, op, z, trace_ts);
            for (std::size_t i = 0; i < trace_ts.size(); ++i)
                summary.trace.push_back({z.name, trace_ts[i], diffs[i]});
        }
        {
            std::ofstream out = open_out(dir / "initial_trace.csv");
            out << "zeta,t,difference\n";
            for (const TraceRow& row : summary.trace)
                out << row.zeta << ',' << fmt(row.t) << ','
                    << fmt(row.difference) << '\n';
        }

        const LevelSetField level = build_level_set(def, grid);
        const CutoffFamily cutoffs =
            build_cutoffs(level, grid, config.cutoffs);
        for (const CutoffMember& m : cutoffs.members)
            summary.cutoff_rows.push_back(
                {m.k, m.l2_one_minus_xi, m.l2_grad_xi});
        {
            std::ofstream out = open_out(dir / "cutoffs.csv");
            out << "k,l2_one_minus_xi,l2_grad_xi\n";
            for (const CutoffRow& row : summary.cutoff_rows)
                out << row.k << ',' << fmt(row.l2_one_minus_xi) << ','
                    << fmt(row.l2_grad_xi) << '\n';
        }

        // Assertions recorded with their tolerances.
        {
            const DiagnosticsRecord& first = summary.initial_record;
            const DiagnosticsRecord& last = summary.final_record;

            const double mass_defect =
                std::fabs(last.mass - first.mass + last.boundary_flux_cum) /
                std::max(first.mass, 1e-12);
            summary.assertions.push_back(make_assertion(
                "mass_balance", mass_defect, params.mass_identity_rel));

            double worst_min = 0.0;
            double worst_growth = 0.0;
            for (const DiagnosticsRecord& r : traj.diagnostics) {
                worst_min = std::min(worst_min, r.min);
                worst_growth = std::max(
                    worst_growth,
                    (r.linf - first.linf) / std::max(first.linf, 1e-30));
            }
            summary.assertions.push_back(make_assertion(
                "positivity", -worst_min, -params.positivity_floor));
            summary.assertions.push_back(make_assertion(
                "max_principle", worst_growth, params.maxprinciple_rel));

            ledger_assertions(traj, params, op.coeff.lambda_lo,
                              summary.assertions);

            double worst_cut = -1e300;
            for (std::size_t i = 1; i < summary.cutoff_rows.size(); ++i)
                worst_cut = std::max(
                    worst_cut, (summary.cutoff_rows[i].l2_one_minus_xi -
                                summary.cutoff_rows[i - 1].l2_one_minus_xi) /
                                   summary.cutoff_rows[i - 1].l2_one_minus_xi);
            if (summary.cutoff_rows.size() < 2) worst_cut = -1.0;
            summary.assertions.push_back(
                make_assertion("cutoff_decreasing", worst_cut, 0.0));

            double worst_decay = -1e300;
            if (summary.decay_abs.size() >= 2) {
                for (std::size_t g = 0; g < summary.gamma_names.size(); ++g)
                    worst_decay = std::max(worst_decay,
                                           summary.decay_abs.back()[g] -
                                               summary.decay_abs.front()[g]);
            } else {
                worst_decay = 0.0;
            }
            summary.assertions.push_back(
                make_assertion("boundary_flux_decay", worst_decay, 0.0));

            summary.assertions.push_back(
                make_assertion("operator_suite",
                               -summary.inequalities.worst_margin(),
                               summary.inequalities.tolerance));
        }

        // Summary artifact.
        {
            ordered_json j;
            j["config"] = ordered_json::object();
            for (const auto& [key, value] : summary.config.echo())
                j["config"][key] = value;
            j["grid"] = {{"dim", grid.dim},
                         {"nx", grid.n[0]},
                         {"ny", grid.dim == 2 ? grid.n[1] : 1},
                         {"cells", grid.cells},
                         {"extent_x", grid.extent[0]},
                         {"extent_y", grid.dim == 2 ? grid.extent[1] : 0.0}};
            j["spectrum"] = {{"lambda1", dec.lambda1()},
                             {"lambda_max", dec.lambda_max()},
                             {"modes", dec.n}};
            j["initial"] = record_json(summary.initial_record);
            j["final"] = record_json(summary.final_record);
            j["assertions"] = ordered_json::array();
            for (const Assertion& a : summary.assertions)
                j["assertions"].push_back({{"name", a.name},
                                           {"measured", a.measured},
                                           {"bound", a.bound},
                                           {"pass", a.pass}});
            j["inequalities"] =
                ordered_json::parse(summary.inequalities.to_json());
            j["decay"] = {{"taus", summary.decay_taus},
                          {"gammas", summary.gamma_names},
                          {"J_abs", summary.decay_abs}};
            j["residuals"] = ordered_json::array();
            for (const auto& [name, value] : summary.residuals)
                j["residuals"].push_back({{"phi", name},
                                          {"n", config.nx},
                                          {"dt", config.dt_max},
                                          {"residual", value}});
            j["initial_trace"] = ordered_json::array();
            for (const TraceRow& row : summary.trace)
                j["initial_trace"].push_back({{"zeta", row.zeta},
                                              {"t", row.t},
                                              {"difference", row.difference}});
            j["cutoffs"] = ordered_json::array();
            for (const CutoffRow& row : summary.cutoff_rows)
                j["cutoffs"].push_back(
                    {{"k", row.k},
                     {"l2_one_minus_xi", row.l2_one_minus_xi},
                     {"l2_grad_xi", row.l2_grad_xi}});
            j["snapshots"] = snap_list;
            std::ofstream out = open_out(dir / "summary.json");
            out << j.dump(2) << '\n';
        }

        summary.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t_start)
                .count();
        return summary;
    } catch (const std::exception& e) {
        std::ofstream marker(dir / "FAILED", std::ios::binary);
        marker << e.what() << '\n';
        throw;
    }
}

namespace {

struct LoadedRun {
    std::string dir;
    ordered_json summary;
    double delta = 0.0;
    double mu = 0.0;
    int cells = 0;
    double cell_volume = 0.0;
    std::vector<double> snap_times;
    std::vector<std::vector<double>> snaps;
};

std::vector<double> load_snapshot_column(const std::filesystem::path& path,
                                         int cells) {
    std::ifstream in(path);
    if (!in)
        throw ComparisonError("cannot read snapshot '" + path.string() + "'");
    std::string line;
    std::getline(in, line); // header
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(cells));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find_last_of(',');
        u.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
    }
    if (static_cast<int>(u.size()) != cells)
        throw ComparisonError("snapshot '" + path.string() + "' has " +
                              std::to_string(u.size()) + " rows, expected " +
                              std::to_string(cells));
    return u;
}

LoadedRun load_run(const std::string& dir) {
    const std::filesystem::path p(dir);
    std::ifstream in(p / "summary.json");
    if (!in)
        throw ComparisonError("run directory '" + dir +
                              "' has no summary.json");
    LoadedRun run;
    run.dir = dir;
    in >> run.summary;

    const auto& echo = run.summary.at("config");
    run.delta = std::stod(echo.at("solver.delta").get<std::string>());
    run.mu = std::stod(echo.at("solver.mu").get<std::string>());
    const auto& grid = run.summary.at("grid");
    run.cells = grid.at("cells").get<int>();
    const int dim = grid.at("dim").get<int>();
    const int nx = grid.at("nx").get<int>();
    const int ny = grid.at("ny").get<int>();
    const double ex = grid.at("extent_x").get<double>();
    const double ey = grid.at("extent_y").get<double>();
    const double hx = ex / (nx + 1);
    run.cell_volume = dim == 2 ? hx * (ey / (ny + 1)) : hx;

    for (const auto& snap : run.summary.at("snapshots")) {
        run.snap_times.push_back(snap.at("t").get<double>());
        run.snaps.push_back(load_snapshot_column(
            p / snap.at("file").get<std::string>(), run.cells));
    }
    return run;
}

void require_matching(const LoadedRun& a, const LoadedRun& b) {
    const auto& ea = a.summary.at("config");
    const auto& eb = b.summary.at("config");
    for (const auto& [key, value] : ea.items()) {
        const bool shared = key.rfind("domain.", 0) == 0 ||
                            key.rfind("initial.", 0) == 0 ||
                            key == "solver.t_end" ||
                            key == "probes.snapshot_dt" ||
                            key == "fractional.s";
        if (!shared) continue;
        const std::string va = value.get<std::string>();
        const std::string vb = eb.at(key).get<std::string>();
        if (va != vb)
            throw ComparisonError("runs '" + a.dir + "' and '" + b.dir +
                                  "' disagree on " + key + ": '" + va +
                                  "' vs '" + vb + "'");
    }
    if (a.snap_times.size() != b.snap_times.size())
        throw ComparisonError("runs '" + a.dir + "' and '" + b.dir +
                              "' have different snapshot counts");
}

double pair_l2(const LoadedRun& a, const LoadedRun& b) {
    std::vector<double> d2(a.snap_times.size(), 0.0);
    for (std::size_t k = 0; k < a.snap_times.size(); ++k) {
        if (std::fabs(a.snap_times[k] - b.snap_times[k]) >
            1e-12 * std::max(1.0, std::fabs(a.snap_times[k])))
            throw ComparisonError("runs '" + a.dir + "' and '" + b.dir +
                                  "' disagree on snapshot times");
        double acc = 0.0;
        for (int i = 0; i < a.cells; ++i) {
            const double d = a.snaps[k][static_cast<std::size_t>(i)] -
                             b.snaps[k][static_cast<std::size_t>(i)];
            acc += d * d;
        }
        d2[k] = acc * a.cell_volume;
    }
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < d2.size(); ++k)
        integral += 0.5 * (a.snap_times[k + 1] - a.snap_times[k]) *
                    (d2[k] + d2[k + 1]);
    return std::sqrt(integral);
}

} // namespace

std::string ComparisonTable::to_json() const {
    ordered_json j;
    j["runs"] = ordered_json::array();
    for (std::size_t i = 0; i < runs.size(); ++i)
        j["runs"].push_back({{"dir", runs[i]},
                             {"delta", deltas[i]},
                             {"mu", mus[i]},
                             {"mass_drift", mass_drifts[i]}});
    j["pairs"] = ordered_json::array();
    for (const ComparisonPair& p : pairs)
        j["pairs"].push_back({{"a", p.run_a},
                              {"b", p.run_b},
                              {"l2_space_time", p.l2_space_time},
                              {"final_mass_delta", p.final_mass_delta},
                              {"final_linf_delta", p.final_linf_delta}});
    j["consecutive_l2_decreasing"] = consecutive_l2_decreasing;
    j["mass_drift_decreasing"] = mass_drift_decreasing;
    return j.dump(2) + "\n";
}

ComparisonTable compare_runs(const std::vector<std::string>& run_dirs) {
    if (run_dirs.size() < 2)
        throw ConfigError("comparison needs at least two run directories");

    std::vector<LoadedRun> loaded;
    loaded.reserve(run_dirs.size());
    for (const std::string& dir : run_dirs) loaded.push_back(load_run(dir));
    for (std::size_t i = 1; i < loaded.size(); ++i)
        require_matching(loaded.front(), loaded[i]);

    std::stable_sort(loaded.begin(), loaded.end(),
                     [](const LoadedRun& a, const LoadedRun& b) {
                         if (a.delta != b.delta) return a.delta > b.delta;
                         return a.mu > b.mu;
                     });

    ComparisonTable table;
    for (const LoadedRun& run : loaded) {
        table.runs.push_back(run.dir);
        table.deltas.push_back(run.delta);
        table.mus.push_back(run.mu);
        const double m0 = run.summary.at("initial").at("mass").get<double>();
        const double mT = run.summary.at("final").at("mass").get<double>();
        table.mass_drifts.push_back(std::fabs(mT - m0));
    }

    // Consecutive pairs first (the continuation reading), then the rest.
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t gap = 1; gap < loaded.size(); ++gap)
        for (std::size_t i = 0; i + gap < loaded.size(); ++i)
            order.emplace_back(i, i + gap);
    for (const auto& [i, k] : order) {
        const LoadedRun& a = loaded[i];
        const LoadedRun& b = loaded[k];
        ComparisonPair pair;
        pair.run_a = a.dir;
        pair.run_b = b.dir;
        pair.l2_space_time = pair_l2(a, b);
        pair.final_mass_delta =
            std::fabs(a.summary.at("final").at("mass").get<double>() -
                      b.summary.at("final").at("mass").get<double>());
        pair.final_linf_delta =
            std::fabs(a.summary.at("final").at("linf").get<double>() -
                      b.summary.at("final").at("linf").get<double>());
        table.pairs.push_back(std::move(pair));
    }

    table.consecutive_l2_decreasing = true;
    for (std::size_t i = 1; i + 1 < loaded.size(); ++i)
        if (!(table.pairs[i].l2_space_time < table.pairs[i - 1].l2_space_time))
            table.consecutive_l2_decreasing = false;
    table.mass_drift_decreasing = true;
    for (std::size_t i = 1; i < table.mass_drifts.size(); ++i)
        if (!(table.mass_drifts[i] < table.mass_drifts[i - 1]))
            table.mass_drift_decreasing = false;
    return table;
}

bool ContinuationResult::all_pass() const {
    for (const RunSummary& s : summaries)
        if (!s.all_pass()) return false;
    return table.consecutive_l2_decreasing && table.mass_drift_decreasing;
}

ContinuationResult run_continuation(const RunConfig& base,
                                    const std::vector<double>& deltas,
                                    const std::vector<double>& mus,
                                    const std::string& out_dir) {
    if (deltas.size() != mus.size())
        throw ConfigError("continuation needs equally many deltas and mus, "
                          "got " +
                          std::to_string(deltas.size()) + " and " +
                          std::to_string(mus.size()));
    if (deltas.size() < 2)
        throw ConfigError("continuation needs at least two (delta, mu) "
                          "levels");
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (!(deltas[i] > 0.0 && deltas[i] <= 1.0) ||
            !(mus[i] > 0.0 && mus[i] <= 1.0))
            throw ConfigError("continuation levels must lie in (0, 1]; "
                              "level " +
                              std::to_string(i) + " is (" + fmt(deltas[i]) +
                              ", " + fmt(mus[i]) + ")");

    std::filesystem::create_directories(out_dir);
    ContinuationResult result;
    std::vector<std::string> dirs;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        RunConfig cfg = base;
        cfg.delta = deltas[i];
        cfg.mu = mus[i];
        char name[16];
        std::snprintf(name, sizeof name, "run_%02zu", i);
        const std::string sub = (std::filesystem::path(out_dir) / name).string();
        result.summaries.push_back(run_scenario(cfg, sub));
        dirs.push_back(sub);
    }
    result.table = compare_runs(dirs);

    ordered_json j = ordered_json::parse(result.table.to_json());
    j["runs_pass"] = ordered_json::array();
    for (const RunSummary& s : result.summaries)
        j["runs_pass"].push_back(s.all_pass());
    j["all_pass"] = result.all_pass();
    std::ofstream out =
        open_out(std::filesystem::path(out_dir) / "continuation_report.json");
    out << j.dump(2) << '\n';
    return result;
}

} // namespace fraclab
