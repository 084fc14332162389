#pragma once

#include "fraclab/grid.hpp"

#include <vector>

namespace fraclab {

// One quadrature node on an inward-offset boundary shell: position, outward
// unit normal of the boundary side it offsets, and its surface weight.
struct ShellNode {
    double x = 0.0;
    double y = 0.0;
    double nx = 0.0;
    double ny = 0.0;
    double weight = 0.0;
};

struct Shell {
    double tau = 0.0;
    double offset = 0.0; // epsilon * tau, in length units
    std::vector<ShellNode> nodes;

    double weight_sum() const;
};

// Inward normal-offset deformation of an interval or rectangle boundary:
// the shell at parameter tau is the boundary pushed inward by epsilon*tau.
// For these straight boundaries the deformation Jacobian is exactly 1, so
// the quadrature weights are plain segment lengths (midpoint rule per
// side, corners excluded by construction); in 1D a shell is two points of
// weight 1. tau = 0 reproduces the boundary itself.
struct Deformation {
    double epsilon = 0.0;
    std::vector<Shell> shells; // in the order of the given tau list

    const Shell& shell_for(double tau) const; // exact match or ConfigError
};

// Builds shells for every tau in tau_list (descending toward 0 expected;
// values must be distinct and nonnegative). Throws ConfigError when the
// largest offset reaches half the smallest domain extent (shells from
// opposite sides would collide).
Deformation build_deformation(const Grid& grid, double epsilon,
                              const std::vector<double>& tau_list);

} // namespace fraclab
