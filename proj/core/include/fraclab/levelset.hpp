#pragma once

#include "fraclab/deformation.hpp"
#include "fraclab/elliptic.hpp"
#include "fraclab/grid.hpp"

#include <vector>

namespace fraclab {

// Dimensionless boundary level h(x) = min(dist(x, boundary)/epsilon, 1),
// sampled at cell nodes, with its discrete gradient averaged back to nodes.
// The signed level s(x) coincides with h on the interior (the only branch a
// node sample ever sees) and saturates at 1 outside the shell region.
struct LevelSetField {
    double epsilon = 0.0;
    std::vector<double> h;  // per node, in [0,1]
    std::vector<double> gx; // node-averaged gradient components
    std::vector<double> gy;

    double signed_level(int cell) const { return h[cell]; }
};

LevelSetField build_level_set(const Deformation& def, const Grid& grid);

// Boundary cutoff family xi_k = 1 - exp(-k s(x)) with the measured norms
// the energy-estimate proofs rely on: l2_one_minus_xi approximates
// int |1 - xi_k|^2 and l2_grad_xi approximates int |grad xi_k|^2 (facewise
// gradient, zero beyond the boundary where xi vanishes).
struct CutoffMember {
    int k = 0;
    std::vector<double> xi;
    double l2_one_minus_xi = 0.0;
    double l2_grad_xi = 0.0;
};

struct CutoffFamily {
    std::vector<CutoffMember> members; // in k_list order
};

CutoffFamily build_cutoffs(const LevelSetField& level, const Grid& grid,
                           const std::vector<int>& k_list);

} // namespace fraclab
