#include "fraclab/solver.hpp"

#include "fraclab/errors.hpp"
#include "fraclab/linsolve.hpp"
#include "fraclab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace fraclab {

namespace {

double sum_mass(const EllipticOperator& op, const std::vector<double>& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * op.weights[i];
    return acc;
}

double max_abs(const std::vector<double>& u) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::fabs(x));
    return m;
}

double min_value(const std::vector<double>& u) {
    double m = u.empty() ? 0.0 : u[0];
    for (double x : u) m = std::min(m, x);
    return m;
}

void append_field(std::string& out, double v, bool first) {
    char buf[40];
    std::snprintf(buf, sizeof buf, first ? "%.17g" : ",%.17g", v);
    out += buf;
}

} // namespace

InitialFamily initial_family_from_name(const std::string& name) {
    if (name == "zero") return InitialFamily::Zero;
    if (name == "indicator") return InitialFamily::Indicator;
    if (name == "bump") return InitialFamily::Bump;
    if (name == "random") return InitialFamily::Random;
    throw ConfigError("unknown initial family '" + name +
                      "' (expected zero, indicator, bump, or random)");
}

std::string initial_family_name(InitialFamily f) {
    switch (f) {
    case InitialFamily::Zero: return "zero";
    case InitialFamily::Indicator: return "indicator";
    case InitialFamily::Bump: return "bump";
    case InitialFamily::Random: return "random";
    }
    return "?";
}

std::vector<double> prepare_initial(const EllipticOperator& op, const InitialSpec& spec,
                                    double delta) {
    if (!(delta > 0.0))
        throw ConfigError("prepare_initial: the mollification width requires delta > 0");
    if (spec.amplitude < 0.0)
        throw ConfigError("prepare_initial: negative amplitude would produce negative data");
    const Grid& g = op.grid;
    std::vector<double> raw(g.cells, 0.0);
    switch (spec.family) {
    case InitialFamily::Zero: break;
    case InitialFamily::Indicator:
        for (int i = 0; i < g.cells; ++i) {
            const double x = g.node_x(i);
            bool inside = x >= spec.box_lo[0] && x <= spec.box_hi[0];
            if (g.dim == 2) {
                const double y = g.node_y(i);
                inside = inside && y >= spec.box_lo[1] && y <= spec.box_hi[1];
            }
            if (inside) raw[i] = spec.amplitude;
        }
        break;
    case InitialFamily::Bump:
        for (int i = 0; i < g.cells; ++i) {
            const double dx = (g.node_x(i) - spec.center[0]) / spec.radius;
            double r2 = dx * dx;
            if (g.dim == 2) {
                const double dy = (g.node_y(i) - spec.center[1]) / spec.radius;
                r2 += dy * dy;
            }
            if (r2 < 1.0) raw[i] = spec.amplitude * std::exp(-1.0 / (1.0 - r2));
        }
        break;
    case InitialFamily::Random: {
        Rng rng(spec.seed);
        for (int i = 0; i < g.cells; ++i) raw[i] = spec.amplitude * rng.uniform();
        break;
    }
    }

    // One implicit heat substep of width delta * min_h regularizes kinks at
    // the resolution scale without moving mass further than the scheme's
    // own first step would.
    std::vector<double> u(g.cells);
    shifted_solve(op.KA, delta * g.min_h(), raw, u);
    for (double& x : u) x = std::max(x, 0.0);

    const double mass_raw = sum_mass(op, raw);
    const double mass_new = sum_mass(op, u);
    if (mass_new > mass_raw && mass_new > 0.0) {
        const double scale = mass_raw / mass_new;
        for (double& x : u) x *= scale;
    }
    return u;
}

const char* DiagnosticsRecord::csv_header() {
    return "t,mass,linf,min,entropy,frac_energy,visc_dissip,h_dissip,k_dissip,boundary_flux_cum";
}

std::string DiagnosticsRecord::csv_row() const {
    std::string out;
    append_field(out, t, true);
    append_field(out, mass, false);
    append_field(out, linf, false);
    append_field(out, min, false);
    append_field(out, entropy, false);
    append_field(out, frac_energy, false);
    append_field(out, visc_dissip, false);
    append_field(out, h_dissip, false);
    append_field(out, k_dissip, false);
    append_field(out, boundary_flux_cum, false);
    return out;
}

DegenerateSolver::DegenerateSolver(const EllipticOperator& op, const SpectralDecomposition& dec,
                                   SolverParams params)
    : op_(op), dec_(dec), params_(params) {
    if (dec_.n != op_.grid.cells)
        throw ConfigError("DegenerateSolver: decomposition size " + std::to_string(dec_.n) +
                          " does not match the grid cell count " +
                          std::to_string(op_.grid.cells));
    if (!(params_.s > 0.0 && params_.s < 1.0))
        throw ConfigError("DegenerateSolver: s must lie in (0,1), got " +
                          std::to_string(params_.s));
    // The entropy functional and the mobility-floor split both divide by mu,
    // and the viscous regularization is what keeps the problem parabolic:
    // the degenerate limit is reached by continuation, never stepped raw.
    if (!(params_.delta > 0.0) || !(params_.mu > 0.0))
        throw ConfigError("DegenerateSolver: delta and mu must be strictly positive "
                          "(got delta=" +
                          std::to_string(params_.delta) + ", mu=" + std::to_string(params_.mu) +
                          "); the degenerate limit is approached by continuation");
    lam_pow_.resize(dec_.values.size());
    for (std::size_t k = 0; k < lam_pow_.size(); ++k)
        lam_pow_[k] = std::pow(dec_.values[k], 1.0 - params_.s);
}

SolverState DegenerateSolver::make_state(const std::vector<double>& u0) const {
    SolverState st;
    st.u = u0;
    st.entropy0 = entropy(u0);
    st.frac_energy0 = frac_energy(u0);
    return st;
}

std::vector<double> DegenerateSolver::pressure(const std::vector<double>& u) const {
    return apply_power(dec_, -params_.s, u);
}

double DegenerateSolver::entropy(const std::vector<double>& u) const {
    const double mu = params_.mu;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = u[i];
        acc += ((x + mu) * std::log1p(x / mu) - x) * op_.weights[i];
    }
    return acc;
}

double DegenerateSolver::frac_energy(const std::vector<double>& u) const {
    return 0.5 * dec_.power_norm_sq(-0.5 * params_.s, u);
}

double DegenerateSolver::stable_dt(const SolverState& state, double t_remaining) const {
    double dt = params_.dt_max;
    if (params_.advection_enabled) {
        const std::vector<double> ku = pressure(state.u);
        double max_speed = 0.0;
        for (std::size_t f = 0; f < op_.grid.faces.size(); ++f) {
            const double v = std::fabs(op_.face_flux(ku, static_cast<int>(f))) /
                             op_.grid.faces[f].area;
            max_speed = std::max(max_speed, v);
        }
        if (max_speed > 0.0)
            dt = std::min(dt, params_.cfl * op_.grid.min_h() / max_speed);
    }
    dt = std::max(dt, 1e-12);
    return std::min(dt, t_remaining);
}

StepReport DegenerateSolver::step(SolverState& state, double dt) const {
    const Grid& g = op_.grid;
    const int N = g.cells;
    const double w = g.cell_volume;
    std::vector<double>& u = state.u;

    StepReport rep;
    rep.dt = dt;
    rep.linf_before = max_abs(u);
    const double mass_before = sum_mass(op_, u);
    const double entropy_before = entropy(u);
    const double frac_before = frac_energy(u);

    // --- explicit donor-cell transport of the pressure flux ------------
    // The concentration part of the mobility moves with the mass flux
    // -u A grad(K u); the donor cell sits upstream of that flux, and the
    // exterior ghost donates nothing.
    std::vector<double> ustar = u;
    double outflow_adv = 0.0;
    if (params_.advection_enabled) {
        const std::vector<double> ku = pressure(u);
        double max_speed = 0.0;
        for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
            const Face& f = g.faces[fi];
            const double T = op_.face_flux(ku, static_cast<int>(fi));
            max_speed = std::max(max_speed, std::fabs(T) / f.area);
            const int donor = (T > 0.0) ? f.to : f.from;
            const double ud = donor >= 0 ? u[donor] : 0.0;
            const double F = ud * T; // face integral of u A grad(Ku) . e_axis
            if (f.from >= 0) ustar[f.from] += dt / w * F;
            if (f.to >= 0) ustar[f.to] -= dt / w * F;
            if (f.boundary()) outflow_adv += (f.from < 0) ? F : -F;
        }
        if (max_speed > 0.0) {
            const double bound = std::max(params_.cfl * g.min_h() / max_speed, 1e-12);
            if (dt > bound * (1.0 + 1e-9))
                throw ConfigError("step: dt " + std::to_string(dt) +
                                  " exceeds the advective stability bound " +
                                  std::to_string(bound));
        }
    }

    // --- implicit spectral step for the mobility floor ------------------
    // (I + dt mu KA^{1-s}) u** = u*, realized on eigen-coefficients; the
    // state update adds the synthesized coefficient difference so that the
    // mass moved agrees with the boundary flux of mu A grad(K u**) to
    // rounding, not merely to reconstruction accuracy.
    std::vector<double> c;
    dec_.coefficients(ustar, c);
    std::vector<double> cdiff(c.size()), cpressure(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double cp = c[k] / (1.0 + dt * params_.mu * lam_pow_[k]);
        cdiff[k] = cp - c[k];
        cpressure[k] = cp * std::pow(dec_.values[k], -params_.s);
    }
    std::vector<double> bump;
    dec_.synthesize(cdiff, bump);
    std::vector<double> ustar2 = std::move(ustar);
    for (int i = 0; i < N; ++i) ustar2[i] += bump[i];
    std::vector<double> ku2;
    dec_.synthesize(cpressure, ku2);
    const double outflow_mu = params_.mu * op_.boundary_outflow(ku2);

    // --- implicit viscous step ------------------------------------------
    std::vector<double> unew(N);
    shifted_solve(op_.KA, dt * params_.delta, ustar2, unew);
    const double outflow_visc = params_.delta * op_.boundary_outflow(unew);

    // --- bookkeeping and audits ------------------------------------------
    const double mass_after = sum_mass(op_, unew);
    rep.boundary_flux = outflow_adv + outflow_mu + outflow_visc;
    rep.mass_defect = std::fabs((mass_after - mass_before) + dt * rep.boundary_flux);
    rep.linf_after = max_abs(unew);
    rep.min_after = min_value(unew);

    // Dissipation functionals of the post-step state, in the
    // identity-coefficient metric (the ellipticity floor scales them in the
    // energy ledgers).
    const std::vector<double> ku_new = pressure(unew);
    const std::vector<double> hu_new = apply_power(dec_, -0.5 * params_.s, unew);
    rep.h_dissip = dirichlet_energy_identity(op_, hu_new);

    double visc = 0.0, kdis = 0.0;
    for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
        const Face& f = g.faces[fi];
        const double h = g.h[f.axis];
        const double m = f.area * h;
        const double u_from = f.from >= 0 ? unew[f.from] : 0.0;
        const double u_to = f.to >= 0 ? unew[f.to] : 0.0;
        const double du = u_to - u_from;
        if (du != 0.0) {
            const double qbar = 0.5 * (u_from + u_to) + params_.mu;
            if (qbar > 0.0) visc += m * (du / h) * (du / h) / qbar;
        }
        const double k_from = f.from >= 0 ? ku_new[f.from] : 0.0;
        const double k_to = f.to >= 0 ? ku_new[f.to] : 0.0;
        const double dku = k_to - k_from;
        if (dku != 0.0) {
            const double T = op_.face_flux(ku_new, static_cast<int>(fi));
            const int donor = (T > 0.0) ? f.to : f.from;
            const double q = (donor >= 0 ? unew[donor] : 0.0) + params_.mu;
            kdis += q * m * (dku / h) * (dku / h);
        }
    }
    rep.visc_dissip = params_.delta * visc;
    rep.k_dissip = kdis;

    const double lam1 = op_.coeff.lambda_lo;
    const double entropy_after = entropy(unew);
    const double frac_after = frac_energy(unew);
    rep.energy_residual_entropy =
        (entropy_after - entropy_before) + dt * lam1 * (rep.visc_dissip + rep.h_dissip);
    rep.energy_residual_frac =
        (frac_after - frac_before) +
        dt * lam1 * (params_.delta * rep.h_dissip + rep.k_dissip);

    // Commit.
    u = std::move(unew);
    state.t += dt;
    state.boundary_flux_cum += dt * rep.boundary_flux;
    state.sum_visc_dissip += dt * rep.visc_dissip;
    state.sum_h_dissip += dt * rep.h_dissip;
    state.sum_k_dissip += dt * rep.k_dissip;
    state.steps += 1;

    if (params_.audit) {
        char buf[160];
        if (rep.min_after < params_.positivity_floor) {
            std::snprintf(buf, sizeof buf,
                          "positivity violated at step %ld (t=%.6g): min u = %.3e", state.steps,
                          state.t, rep.min_after);
            throw PropertyViolation(buf);
        }
        if (rep.linf_after > rep.linf_before * (1.0 + params_.maxprinciple_rel) + 1e-30) {
            std::snprintf(buf, sizeof buf,
                          "maximum principle violated at step %ld (t=%.6g): %.17g -> %.17g",
                          state.steps, state.t, rep.linf_before, rep.linf_after);
            throw PropertyViolation(buf);
        }
        if (rep.mass_defect > params_.mass_identity_rel * std::max(mass_before, 1e-12)) {
            std::snprintf(buf, sizeof buf,
                          "mass bookkeeping defect %.3e at step %ld (t=%.6g) exceeds tolerance",
                          rep.mass_defect, state.steps, state.t);
            throw PropertyViolation(buf);
        }
        const double slack = params_.energy_slack_abs + params_.energy_slack_coeff * dt;
        if (rep.energy_residual_entropy > slack) {
            std::snprintf(buf, sizeof buf,
                          "entropy ledger overshoot %.3e at step %ld (t=%.6g) exceeds slack %.3e",
                          rep.energy_residual_entropy, state.steps, state.t, slack);
            throw PropertyViolation(buf);
        }
        if (rep.energy_residual_frac > slack) {
            std::snprintf(buf, sizeof buf,
                          "energy ledger overshoot %.3e at step %ld (t=%.6g) exceeds slack %.3e",
                          rep.energy_residual_frac, state.steps, state.t, slack);
            throw PropertyViolation(buf);
        }
    }
    return rep;
}

DiagnosticsRecord DegenerateSolver::record(const SolverState& state) const {
    DiagnosticsRecord r;
    r.t = state.t;
    r.mass = sum_mass(op_, state.u);
    r.linf = max_abs(state.u);
    r.min = min_value(state.u);
    r.entropy = entropy(state.u);
    r.frac_energy = frac_energy(state.u);
    r.boundary_flux_cum = state.boundary_flux_cum;

    const Grid& g = op_.grid;
    const std::vector<double> ku = pressure(state.u);
    const std::vector<double> hu = apply_power(dec_, -0.5 * params_.s, state.u);
    r.h_dissip = dirichlet_energy_identity(op_, hu);
    double visc = 0.0, kdis = 0.0;
    for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
        const Face& f = g.faces[fi];
        const double h = g.h[f.axis];
        const double m = f.area * h;
        const double u_from = f.from >= 0 ? state.u[f.from] : 0.0;
        const double u_to = f.to >= 0 ? state.u[f.to] : 0.0;
        const double du = u_to - u_from;
        if (du != 0.0) {
            const double qbar = 0.5 * (u_from + u_to) + params_.mu;
            if (qbar > 0.0) visc += m * (du / h) * (du / h) / qbar;
        }
        const double k_from = f.from >= 0 ? ku[f.from] : 0.0;
        const double k_to = f.to >= 0 ? ku[f.to] : 0.0;
        const double dku = k_to - k_from;
        if (dku != 0.0) {
            const double T = op_.face_flux(ku, static_cast<int>(fi));
            const int donor = (T > 0.0) ? f.to : f.from;
            const double q = (donor >= 0 ? state.u[donor] : 0.0) + params_.mu;
            kdis += q * m * (dku / h) * (dku / h);
        }
    }
    r.visc_dissip = params_.delta * visc;
    r.k_dissip = kdis;
    return r;
}

std::vector<double> Trajectory::interpolate(double t) const {
    if (times.empty()) throw NumericalError("Trajectory::interpolate: empty trajectory");
    if (t <= times.front()) return states.front();
    if (t >= times.back()) return states.back();
    std::size_t hi = 1;
    while (times[hi] < t) ++hi;
    const double t0 = times[hi - 1], t1 = times[hi];
    const double a = (t - t0) / (t1 - t0);
    std::vector<double> out(states[hi].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - a) * states[hi - 1][i] + a * states[hi][i];
    return out;
}

Trajectory record_trajectory(const DegenerateSolver& solver, SolverState& state) {
    Trajectory traj;
    solver.run(state, [&](const SolverState& st, const DiagnosticsRecord& rec) {
        traj.times.push_back(st.t);
        traj.states.push_back(st.u);
        traj.diagnostics.push_back(rec);
    });
    return traj;
}

long DegenerateSolver::run(
    SolverState& state,
    const std::function<void(const SolverState&, const DiagnosticsRecord&)>& on_record) const {
    if (state.steps == 0 && on_record) on_record(state, record(state));
    const double horizon = params_.t_end;
    const double eps = 1e-14 * std::max(horizon, 1.0);
    long taken = 0;
    while (horizon - state.t > eps) {
        const double dt = stable_dt(state, horizon - state.t);
        step(state, dt);
        ++taken;
        if (on_record) on_record(state, record(state));
    }
    return taken;
}

} // namespace fraclab
