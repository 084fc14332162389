#include "fraclab/config.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/inequalities.hpp"
#include "fraclab/scenario.hpp"
#include "fraclab/spectral.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_level_list(const std::string& text,
                                     const std::string& flag) {
    std::vector<double> out;
    std::string cur;
    const auto flush = [&] {
        if (cur.empty())
            throw fraclab::ConfigError(flag + ": empty entry in list '" +
                                       text + "'");
        char* end = nullptr;
        const double v = std::strtod(cur.c_str(), &end);
        if (end != cur.c_str() + cur.size())
            throw fraclab::ConfigError(flag + ": cannot parse '" + cur +
                                       "' as a number");
        out.push_back(v);
        cur.clear();
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else if (!std::isspace(static_cast<unsigned char>(c)))
            cur += c;
    }
    flush();
    return out;
}

void print_assertions(const fraclab::RunSummary& summary) {
    for (const fraclab::Assertion& a : summary.assertions)
        std::printf("  [%s] %-26s measured=% .3e bound=% .3e\n",
                    a.pass ? "PASS" : "FAIL", a.name.c_str(), a.measured,
                    a.bound);
    std::printf("  [%s] %-26s worst_margin=% .3e tolerance=% .3e\n",
                summary.inequalities.all_pass() ? "PASS" : "FAIL",
                "operator_inequalities", summary.inequalities.worst_margin(),
                summary.inequalities.tolerance);
}

int do_run(const std::string& config_path, const std::string& out_flag) {
    fraclab::RunConfig cfg = fraclab::load_config_file(config_path);
    if (!out_flag.empty()) cfg.output_dir = out_flag;
    if (cfg.output_dir.empty())
        throw fraclab::ConfigError(
            "no output directory: pass --out or set [output] dir");

    const fraclab::RunSummary summary =
        fraclab::run_scenario(cfg, cfg.output_dir);
    std::printf("scenario finished: t=%.6g mass=%.9g linf=%.6g min=%.3e\n",
                summary.final_record.t, summary.final_record.mass,
                summary.final_record.linf, summary.final_record.min);
    print_assertions(summary);
    std::printf("wall %.2f s; artifacts in %s\n", summary.wall_seconds,
                cfg.output_dir.c_str());
    return summary.all_pass() ? 0 : 1;
}

int do_continue(const std::string& config_path, const std::string& deltas_text,
                const std::string& mus_text, const std::string& out_flag) {
    fraclab::RunConfig cfg = fraclab::load_config_file(config_path);
    if (!out_flag.empty()) cfg.output_dir = out_flag;
    if (cfg.output_dir.empty())
        throw fraclab::ConfigError(
            "no output directory: pass --out or set [output] dir");
    const std::vector<double> deltas =
        parse_level_list(deltas_text, "--deltas");
    const std::vector<double> mus = parse_level_list(mus_text, "--mus");

    const fraclab::ContinuationResult result =
        fraclab::run_continuation(cfg, deltas, mus, cfg.output_dir);
    double wall = 0.0;
    for (std::size_t i = 0; i < result.summaries.size(); ++i) {
        const fraclab::RunSummary& s = result.summaries[i];
        wall += s.wall_seconds;
        std::printf("level %zu: delta=%.3e mu=%.3e mass_drift=%.6e [%s]\n", i,
                    s.config.delta, s.config.mu,
                    result.table.mass_drifts[i],
                    s.all_pass() ? "PASS" : "FAIL");
    }
    for (std::size_t i = 0; i + 1 < result.summaries.size(); ++i)
        std::printf("pair %zu-%zu: L2(space-time) difference %.6e\n", i, i + 1,
                    result.table.pairs[i].l2_space_time);
    std::printf("  [%s] pairwise_l2_decreasing\n",
                result.table.consecutive_l2_decreasing ? "PASS" : "FAIL");
    std::printf("  [%s] mass_drift_decreasing\n",
                result.table.mass_drift_decreasing ? "PASS" : "FAIL");
    std::printf("wall %.2f s; report in %s/continuation_report.json\n", wall,
                cfg.output_dir.c_str());
    return result.all_pass() ? 0 : 1;
}

int do_compare(const std::vector<std::string>& dirs,
               const std::string& out_file) {
    const fraclab::ComparisonTable table = fraclab::compare_runs(dirs);
    if (!out_file.empty()) {
        std::ofstream out(out_file, std::ios::binary | std::ios::trunc);
        if (!out)
            throw fraclab::ConfigError("cannot open comparison output '" +
                                       out_file + "'");
        out << table.to_json();
    }
    for (const fraclab::ComparisonPair& p : table.pairs)
        std::printf("%s vs %s: L2=%.6e mass_delta=%.3e linf_delta=%.3e\n",
                    p.run_a.c_str(), p.run_b.c_str(), p.l2_space_time,
                    p.final_mass_delta, p.final_linf_delta);
    return 0;
}

int do_check_operators(const std::string& config_path) {
    const fraclab::RunConfig cfg = fraclab::load_config_file(config_path);
    const fraclab::Grid grid = cfg.make_grid();
    const fraclab::CoefficientField coeff =
        fraclab::sample_coefficient(grid, cfg.make_coefficient());
    const fraclab::EllipticOperator op =
        fraclab::assemble_elliptic(grid, coeff);
    const fraclab::SpectralDecomposition dec = fraclab::eigendecompose(op);
    const fraclab::InequalityReport report = fraclab::check_inequalities(
        op, dec, cfg.s, cfg.inequality_probes, cfg.probe_seed);
    for (const fraclab::InequalityCheck& c : report.checks)
        std::printf("[%s] %-28s worst_margin=% .3e\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.worst_margin);
    std::printf("s=%.3g probes=%d tolerance=%.1e lambda1=%.6g\n", report.s,
                report.probes, report.tolerance, report.coercivity_constant);
    return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral fractional calculus and degenerate diffusion "
                 "laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string deltas_text;
    std::string mus_text;
    std::vector<std::string> compare_dirs;

    CLI::App* run = app.add_subcommand(
        "run", "run one scenario and write its artifact set");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_path,
                    "output directory (overrides [output] dir)");

    CLI::App* cont = app.add_subcommand(
        "continue", "rerun a scenario over a (delta, mu) continuation grid");
    cont->add_option("--config", config_path, "configuration file")
        ->required();
    cont->add_option("--deltas", deltas_text, "comma-separated delta levels")
        ->required();
    cont->add_option("--mus", mus_text, "comma-separated mu levels")
        ->required();
    cont->add_option("--out", out_path,
                     "output directory (overrides [output] dir)");

    CLI::App* compare = app.add_subcommand(
        "compare", "compare completed run directories pairwise");
    compare->add_option("dirs", compare_dirs, "run directories")
        ->required()
        ->expected(2, -1);
    compare->add_option("--out", out_path, "comparison table output file");

    CLI::App* check = app.add_subcommand(
        "check-operators", "run only the operator inequality suite");
    check->add_option("--config", config_path, "configuration file")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return do_run(config_path, out_path);
        if (cont->parsed())
            return do_continue(config_path, deltas_text, mus_text, out_path);
        if (compare->parsed()) return do_compare(compare_dirs, out_path);
        if (check->parsed()) return do_check_operators(config_path);
        return 2;
    } catch (const fraclab::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const fraclab::ComparisonError& e) {
        std::fprintf(stderr, "comparison error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
