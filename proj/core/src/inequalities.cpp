#include "fraclab/inequalities.hpp"
#include "fraclab/rng.hpp"

#include <json.hpp>

#include <cmath>

namespace fraclab {

namespace {

double scale_of(double a, double b) {
    const double s = std::fmax(std::fabs(a), std::fabs(b));
    return s > 0.0 ? s : 1.0;
}

struct WorstTracker {
    double worst = 1e300;
    void update(double margin) {
        if (margin < worst) worst = margin;
    }
};

} // namespace

bool InequalityReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

double InequalityReport::worst_margin() const {
    double w = 1e300;
    for (const auto& c : checks)
        if (c.worst_margin < w) w = c.worst_margin;
    return w;
}

std::string InequalityReport::to_json() const {
    nlohmann::ordered_json j;
    j["s"] = s;
    j["coercivity_constant"] = coercivity_constant;
    j["lambda_lo"] = lambda_lo;
    j["lambda_hi"] = lambda_hi;
    j["probes"] = probes;
    j["tolerance"] = tolerance;
    j["all_pass"] = all_pass();
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name},
                               {"worst_margin", c.worst_margin},
                               {"pass", c.pass}});
    return j.dump(2) + "\n";
}

InequalityReport check_inequalities(const EllipticOperator& op,
                                    const SpectralDecomposition& dec, double s,
                                    int probe_count, std::uint64_t seed,
                                    double tolerance) {
    InequalityReport report;
    report.s = s;
    report.coercivity_constant = dec.lambda1();
    report.lambda_lo = op.coeff.lambda_lo;
    report.lambda_hi = op.coeff.lambda_hi;
    report.probes = probe_count;
    report.tolerance = tolerance;

    const int n = dec.n;
    const double lam1 = dec.lambda1();
    const double lam1_s = std::pow(lam1, s);
    const double grad_const =
        report.lambda_hi / report.lambda_lo * std::pow(lam1, -2.0 * s);

    WorstTracker coercivity, poincare, selfadj, sand_lo, sand_hi, id_energy,
        id_halfpower, grad_bound, inverse_id;

    Rng rng(seed);
    std::vector<double> u(n), v(n);
    for (int probe = 0; probe < probe_count; ++probe) {
        for (int i = 0; i < n; ++i) u[i] = rng.symmetric();
        for (int i = 0; i < n; ++i) v[i] = rng.symmetric();

        const std::vector<double> lsu = apply_power(dec, s, u);
        const std::vector<double> lsv = apply_power(dec, s, v);
        const std::vector<double> ku = apply_power(dec, -s, u);
        const std::vector<double> hu = apply_power(dec, -0.5 * s, u);

        const double uu = op.inner(u, u);
        const double lsu_u = op.inner(lsu, u);
        coercivity.update((lsu_u - lam1_s * uu) / scale_of(lsu_u, lam1_s * uu));

        const double norm_u = std::sqrt(uu);
        const double norm_lsu = std::sqrt(op.inner(lsu, lsu));
        const double lhs_p = norm_lsu / lam1_s;
        poincare.update((lhs_p - norm_u) / scale_of(lhs_p, norm_u));

        const double a = op.inner(lsu, v);
        const double b = op.inner(u, lsv);
        selfadj.update(-std::fabs(a - b) / scale_of(a, b));

        // Pressure block: <K_A Ku, u> against the half-power energies.
        const std::vector<double> ka_ku = op.apply(ku);
        const double mid = op.inner(ka_ku, u);
        const double ei_hu = dirichlet_energy_identity(op, hu);
        const double ea_hu = dirichlet_energy(op, hu);
        const double half_norm = dec.power_norm_sq(0.5 * (1.0 - s), u);

        const double lo = report.lambda_lo * ei_hu;
        const double hi = report.lambda_hi * ei_hu;
        sand_lo.update((mid - lo) / scale_of(mid, lo));
        sand_hi.update((hi - mid) / scale_of(mid, hi));
        id_energy.update(-std::fabs(mid - ea_hu) / scale_of(mid, ea_hu));
        id_halfpower.update(-std::fabs(mid - half_norm) / scale_of(mid, half_norm));

        const double ei_ku = dirichlet_energy_identity(op, ku);
        const double ei_u = dirichlet_energy_identity(op, u);
        const double bound = grad_const * ei_u;
        grad_bound.update((bound - ei_ku) / scale_of(bound, ei_ku));

        // Inverse identity K(L^s u) = u: the round trip through both
        // transforms must reproduce the probe to spectral roundoff.
        const std::vector<double> round_trip = apply_power(dec, -s, lsu);
        double defect_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = round_trip[i] - u[i];
            defect_sq += d * d * op.weights[i];
        }
        inverse_id.update(-std::sqrt(defect_sq / uu));
    }

    auto emit = [&](const char* name, const WorstTracker& t) {
        InequalityCheck c;
        c.name = name;
        c.worst_margin = t.worst;
        c.pass = t.worst >= -tolerance;
        report.checks.push_back(c);
    };
    emit("coercivity", coercivity);
    emit("poincare", poincare);
    emit("self_adjoint", selfadj);
    emit("sandwich_lower", sand_lo);
    emit("sandwich_upper", sand_hi);
    emit("pressure_identity_energy", id_energy);
    emit("pressure_identity_halfpower", id_halfpower);
    emit("pressure_gradient_bound", grad_bound);
    emit("inverse_identity", inverse_id);
    return report;
}

} // namespace fraclab
