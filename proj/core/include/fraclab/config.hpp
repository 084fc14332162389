#pragma once

#include "fraclab/coefficient.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/solver.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fraclab {

// Flat, line-based run configuration: `key = value` entries under
// [section] headers, `#` comments, all violations collected before any is
// reported, unknown keys rejected with a nearest-key suggestion.
struct RunConfig {
    // [domain]
    int dim = 1;
    double extent_x = 1.0;
    double extent_y = 1.0;
    int nx = 128;
    int ny = 24;

    // [coefficient]
    std::string coefficient_family = "constant"; // constant|smooth_anisotropic|rotated
    double coefficient_value = 1.0;              // constant family
    double coefficient_theta = 0.5;              // rotated family
    double coefficient_eig1 = 2.0;
    double coefficient_eig2 = 1.0;

    // [fractional]
    double s = 0.5;

    // [solver]
    double delta = 1e-3;
    double mu = 1e-3;
    double dt_max = 1e-3;
    double t_end = 0.1;

    // [initial]
    std::string initial_family = "indicator"; // zero|indicator|bump|random
    double box_lo_x = 0.25;
    double box_lo_y = 0.25;
    double box_hi_x = 0.75;
    double box_hi_y = 0.75;
    double center_x = 0.5;
    double center_y = 0.5;
    double radius = 0.25;
    double amplitude = 1.0;
    std::uint64_t initial_seed = 1;

    // [probes]
    double epsilon = 0.1;
    std::vector<double> taus = {1.0, 0.5, 0.25, 0.125};
    std::vector<int> cutoffs = {4, 16, 64};
    double snapshot_dt = 0.01;
    int inequality_probes = 100;
    std::uint64_t probe_seed = 1234;

    // [output]
    std::string output_dir;

    // Realizations of the configured objects.
    Grid make_grid() const;
    CoefficientSpec make_coefficient() const;
    InitialSpec make_initial() const;
    SolverParams make_solver_params() const;

    // Canonical flat echo of every field ("section.key" -> value string,
    // doubles printed with full precision); deterministic ordering.
    std::map<std::string, std::string> echo() const;
};

// Parses and validates configuration text. Throws ConfigError listing
// every violation (unknown keys, type errors, range violations) at once.
RunConfig parse_config(const std::string& text);

// Reads the file and parses it; unreadable path is a ConfigError.
RunConfig load_config_file(const std::string& path);

} // namespace fraclab
