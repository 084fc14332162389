#pragma once

#include "fraclab/elliptic.hpp"

#include <vector>

namespace fraclab {

// Solves (I + alpha*K) x = rhs for SPD K with alpha >= 0. Uses the Thomas
// algorithm when K is tridiagonal (1D operators), otherwise conjugate
// gradients to near machine precision (the shifted systems solved here are
// well conditioned by construction: alpha * lambda_max stays O(1)).
void shifted_solve(const SparseSym& K, double alpha, const std::vector<double>& rhs,
                   std::vector<double>& x);

} // namespace fraclab
