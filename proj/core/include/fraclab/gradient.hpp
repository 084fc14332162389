#pragma once

#include "fraclab/grid.hpp"

#include <vector>

namespace fraclab {

// Per-face normal difference quotients (u_to - u_from)/h with Dirichlet
// ghosts at zero. Squared-norm accumulation weighted by the face measure
// area*h reproduces the identity-coefficient energy u'KI u (mass weights
// folded in).
struct FaceGradient {
    std::vector<double> value; // one entry per grid face
};

FaceGradient discrete_gradient(const Grid& grid, const std::vector<double>& u);

// sum_f value_f^2 * (area_f * h_f)
double gradient_norm_sq(const Grid& grid, const FaceGradient& g);

} // namespace fraclab
