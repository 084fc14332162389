#pragma once

#include "fraclab/elliptic.hpp"

#include <vector>

namespace fraclab {

// Heat-semigroup route to the fractional powers, independent of the
// eigendecomposition. Both transforms integrate Crank-Nicolson heat
// propagation over a log-time trapezoid grid, doubling the node count
// until the self-difference of successive results drops below tolerance,
// with analytic head/tail corrections for the truncated ranges.

struct SemigroupOptions {
    double self_difference_tol = 1e-7;
    int initial_nodes = 64;
    int max_nodes = 8192;
};

struct SemigroupResult {
    std::vector<double> value;
    int nodes = 0;              // node count of the accepted pass
    double self_difference = 0; // relative change at the accepted doubling
};

// e^{-tK} u by Crank-Nicolson substeps. The substep width keeps
// dt * min(lambda_max_bound, 80/t_elapsed) <= 0.5: components with
// t*lambda > 80 are below e^-80 of their initial content, so capping the
// resolved frequency keeps every live mode second-order accurate while the
// substep count stays logarithmic in the time range.
void heat_propagate(const EllipticOperator& op, double lambda_max_bound,
                    double t_from, double t_to, std::vector<double>& v);

// Inverse fractional power via (1/Gamma(s)) int_0^inf e^{-tK}u dt/t^{1-s}.
SemigroupResult apply_inverse_power_semigroup(const EllipticOperator& op, double s,
                                              const std::vector<double>& u,
                                              const SemigroupOptions& opt = {});

// Positive fractional power via
// (1/Gamma(-s)) int_0^inf (e^{-tK}u - u) dt/t^{1+s}.
SemigroupResult apply_power_semigroup(const EllipticOperator& op, double s,
                                      const std::vector<double>& u,
                                      const SemigroupOptions& opt = {});

} // namespace fraclab
