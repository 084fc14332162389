#pragma once

#include "fraclab/elliptic.hpp"
#include "fraclab/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fraclab {

// One structural inequality of the fractional calculus, checked over a
// family of random probes. Margins are relative: (lhs - rhs) / scale for
// one-sided bounds, -|difference| / scale for identities, so a check
// passes when worst_margin >= -tolerance.
struct InequalityCheck {
    std::string name;
    double worst_margin = 0.0;
    bool pass = false;
};

struct InequalityReport {
    double s = 0.0;
    double coercivity_constant = 0.0; // lambda_1: sharp on the first mode
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    int probes = 0;
    double tolerance = 0.0;
    std::vector<InequalityCheck> checks;

    bool all_pass() const;
    double worst_margin() const;
    std::string to_json() const;
};

// Verifies on random probes, reporting worst-case relative margins:
//   coercivity                <L^s u, u>  >=  lambda_1^s |u|^2
//   poincare                  |u|  <=  lambda_1^{-s} |L^s u|
//   self_adjoint              <L^s u, v>  ==  <u, L^s v>
//   sandwich_lower/upper      Lambda_lo E_I(Hu) <= <K_A Ku, u> <= Lambda_hi E_I(Hu)
//   pressure_identity_*       <K_A Ku, u> == E_A(Hu) == |L^{(1-s)/2} u|^2
//   pressure_gradient_bound   E_I(Ku) <= Lambda_lo^{-1} Lambda_hi lambda_1^{-2s} E_I(u)
//   inverse_identity          K(L^s u) == u (relative round-trip defect)
// where Ku and Hu are the inverse power and half-power transforms of u.
InequalityReport check_inequalities(const EllipticOperator& op,
                                    const SpectralDecomposition& dec, double s,
                                    int probe_count, std::uint64_t seed,
                                    double tolerance = 1e-10);

} // namespace fraclab
