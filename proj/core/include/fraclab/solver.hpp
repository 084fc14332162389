#pragma once

#include "fraclab/elliptic.hpp"
#include "fraclab/spectral.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fraclab {

// Regularized degenerate parabolic evolution
//
//   d/dt u = delta * div(A grad u) + div((u + mu) A grad (K u)),
//
// where K is the inverse fractional power of the elliptic operator. Time
// stepping is IMEX: donor-cell upwind transport of the pressure flux is
// explicit, the spectral part of the mobility floor (mu K^{1-s} acting in
// eigenspace) and the viscous term (delta, via a shifted sparse solve) are
// implicit. Every step is audited: mass bookkeeping against the boundary
// flux, nonnegativity, the maximum principle, and two energy inequalities.

enum class InitialFamily {
    Zero,
    Indicator, // 1 on an axis-aligned box, 0 elsewhere
    Bump,      // exp(-1/(1-r^2)) supported in a ball
    Random,    // seeded nonnegative noise
};

struct InitialSpec {
    InitialFamily family = InitialFamily::Indicator;
    // Indicator box corners (per axis, in physical units).
    double box_lo[2] = {0.25, 0.25};
    double box_hi[2] = {0.75, 0.75};
    // Bump center and radius.
    double center[2] = {0.5, 0.5};
    double radius = 0.25;
    double amplitude = 1.0;
    std::uint64_t seed = 1; // Random
};

InitialFamily initial_family_from_name(const std::string& name);
std::string initial_family_name(InitialFamily f);

// Samples the raw family, applies one implicit heat substep of width
// delta * min_h (the regularizing mollification), clips negatives, and
// rescales down only if the mollification increased the total mass.
std::vector<double> prepare_initial(const EllipticOperator& op, const InitialSpec& spec,
                                    double delta);

struct SolverParams {
    double s = 0.5;     // fractional order of the pressure transform
    double delta = 0.0; // viscosity of the regularization
    double mu = 0.0;    // mobility floor of the regularization
    double dt_max = 1e-2;
    double t_end = 0.1;
    double cfl = 0.4;
    // Audit tolerances (absolute unless noted).
    double positivity_floor = -1e-12;
    double maxprinciple_rel = 1e-8;   // per-step relative L-inf growth
    double mass_identity_rel = 1e-10; // |d mass - dt * boundary flux| bound
    double energy_slack_abs = 1e-9;
    double energy_slack_coeff = 1.0;  // extra slack proportional to dt
    bool audit = true;                // throw PropertyViolation on breach
    bool advection_enabled = true;    // test hook: disable the transport term
};

// One diagnostics row; written verbatim as a CSV record.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double linf = 0.0;
    double min = 0.0;
    double entropy = 0.0;
    double frac_energy = 0.0;
    double visc_dissip = 0.0;
    double h_dissip = 0.0;
    double k_dissip = 0.0;
    double boundary_flux_cum = 0.0;

    static const char* csv_header();
    std::string csv_row() const;
};

struct SolverState {
    double t = 0.0;
    std::vector<double> u;
    double boundary_flux_cum = 0.0; // time-integrated signed outflow
    // Running dissipation integrals entering the two energy ledgers.
    double sum_visc_dissip = 0.0; // int delta |grad u|^2 / q(u)
    double sum_h_dissip = 0.0;    // int |grad H u|^2
    double sum_k_dissip = 0.0;    // int q(u) |grad K u|^2
    // Initial-state functionals the energy ledgers compare against.
    double entropy0 = 0.0;
    double frac_energy0 = 0.0;
    long steps = 0;
};

struct StepReport {
    double dt = 0.0;
    double boundary_flux = 0.0; // signed outflow integrated over the step
    double mass_defect = 0.0;   // |d mass - dt * flux| after the step
    double linf_before = 0.0;
    double linf_after = 0.0;
    double min_after = 0.0;
    double visc_dissip = 0.0;
    double h_dissip = 0.0;
    double k_dissip = 0.0;
    double energy_residual_entropy = 0.0; // ledger 1 overshoot (<= 0 ideal)
    double energy_residual_frac = 0.0;    // ledger 2 overshoot (<= 0 ideal)
};

// Dense record of a run: state and diagnostics at t = 0 and after every
// accepted step. The probe quadratures integrate over exactly these times.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<DiagnosticsRecord> diagnostics;

    int records() const { return static_cast<int>(times.size()); }
    const std::vector<double>& initial() const { return states.front(); }
    // Linear interpolation of the state at time t (clamped to the range).
    std::vector<double> interpolate(double t) const;
};

class DegenerateSolver {
  public:
    DegenerateSolver(const EllipticOperator& op, const SpectralDecomposition& dec,
                     SolverParams params);

    // Initializes the state from a prepared (mollified) profile at t = 0.
    SolverState make_state(const std::vector<double>& u0) const;

    // Largest stable step from the current transport velocities, bounded by
    // params.dt_max and by t_remaining.
    double stable_dt(const SolverState& state, double t_remaining) const;

    // Advances one IMEX step of width dt and audits the invariants.
    StepReport step(SolverState& state, double dt) const;

    // Runs until t_end, invoking on_record after the initial state and after
    // every step. Returns the number of steps taken.
    long run(SolverState& state,
             const std::function<void(const SolverState&, const DiagnosticsRecord&)>& on_record =
                 {}) const;

    DiagnosticsRecord record(const SolverState& state) const;

    const SolverParams& params() const { return params_; }
    const EllipticOperator& op() const { return op_; }

    // Pressure transform K u (inverse power via the eigenbasis) exposed for
    // the boundary probes.
    std::vector<double> pressure(const std::vector<double>& u) const;
    double entropy(const std::vector<double>& u) const;
    double frac_energy(const std::vector<double>& u) const;

  private:
    const EllipticOperator& op_;
    const SpectralDecomposition& dec_;
    SolverParams params_;
    std::vector<double> lam_pow_; // lambda_k^{1-s}
};

// Runs the solver to t_end from the given state, recording every step.
Trajectory record_trajectory(const DegenerateSolver& solver, SolverState& state);

} // namespace fraclab
