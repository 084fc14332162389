#pragma once

#include "fraclab/deformation.hpp"
#include "fraclab/elliptic.hpp"
#include "fraclab/solver.hpp"

#include <string>
#include <vector>

namespace fraclab {

// Smooth compactly supported profile exp(-1/(1-xi^2)) on (-1,1), zero
// outside, and its derivative. All built-in test functions are tensor
// products of scaled copies of this profile.
double bump_value(double xi);
double bump_slope(double xi);

// One separable factor of a space-time test function: either identically
// one (inactive) or bump((c - center)/halfwidth).
struct BumpFactor {
    bool active = false;
    double center = 0.0;
    double halfwidth = 1.0;

    double value(double c) const;
    double slope(double c) const;
};

// Separable smooth space-time test function f(t, x[, y]) with analytic
// time derivative and spatial gradient.
struct SpaceTimeTest {
    std::string name;
    BumpFactor time;
    BumpFactor x;
    BumpFactor y;

    double value(double t, double px, double py) const;
    double time_slope(double t, double px, double py) const;
    double grad_x(double t, double px, double py) const;
    double grad_y(double t, double px, double py) const;
};

// Spatial weight for initial-trace probes: a smooth bump, a box indicator,
// or the constant-one weight (the latter reduces the probe to a mass
// comparison).
struct SpatialWeight {
    enum class Kind { Bump, Box, One };

    std::string name;
    Kind kind = Kind::One;
    int dim = 1;
    double center[2] = {0.5, 0.5};
    double halfwidth[2] = {0.25, 0.25};
    double lo[2] = {0.25, 0.25};
    double hi[2] = {0.75, 0.75};

    double value(double px, double py) const;
};

// Fixed built-in families, scaled to the given geometry and horizon.
// Flux weights are supported strictly inside (0, t_end) in time and cover
// the closed domain in space, so shell pullbacks see nonzero values; weak
// tests vanish at t = t_end but not at t = 0 and are supported inside the
// domain; trace weights are purely spatial.
std::vector<SpaceTimeTest> builtin_flux_weights(const Grid& grid, double t_end);
std::vector<SpaceTimeTest> builtin_weak_tests(const Grid& grid, double t_end);
std::vector<SpatialWeight> builtin_trace_weights(const Grid& grid);

// Bilinear sampler of the pressure-flux components (A grad p) . e_axis on
// the face-centroid lattice of each axis. Rows along walls where the
// component is tangential are zero (exact for diagonal coefficients since
// the pressure vanishes on the boundary); the normal coordinate clamps to
// the boundary-face value, which is the discrete wall flux itself.
class FluxSampler {
  public:
    FluxSampler(const EllipticOperator& op, const std::vector<double>& p);

    // (A grad p) . e_axis at (px, py); axis 1 in 1D returns 0.
    double component(int axis, double px, double py) const;

  private:
    const Grid* grid_;
    int cols_[2] = {0, 0}; // lattice extent along the face normal
    int rows_[2] = {1, 1}; // transverse extent including zero wall rows
    std::vector<double> lattice_[2];
};

// Bilinear sample of a cell-centered field with Dirichlet ghost zeros.
double sample_cell_field(const Grid& grid, const std::vector<double>& u,
                         double px, double py);

// Time-integrated flux of the trajectory through the tau-shell, weighted
// by gamma pulled back to the boundary along the deformation:
//   J(tau) = int_0^T sum_nodes u (A grad Ku . nu) gamma(t, r + offset nu) w.
// Time integration is the trapezoid rule over the recorded times.
double shell_flux(const Trajectory& traj, const DegenerateSolver& solver,
                  const Deformation& def, double tau,
                  const SpaceTimeTest& gamma);

// Space-time weak-form residual of the trajectory against phi:
//   R(phi) = int_0^T int u (dphi/dt - A grad Ku . grad phi) + int u0 phi(0).
// Vanishes for exact weak solutions of the limit transport equation; for
// regularized runs it carries an O(delta + mu) model floor on top of the
// discretization error.
double weak_residual(const Trajectory& traj, const DegenerateSolver& solver,
                     const SpaceTimeTest& phi);

// |int u(t) zeta - int u(0) zeta| for each requested time, evaluated on
// the time-interpolated trajectory.
std::vector<double> initial_trace_check(const Trajectory& traj,
                                        const EllipticOperator& op,
                                        const SpatialWeight& zeta,
                                        const std::vector<double>& t_list);

} // namespace fraclab
