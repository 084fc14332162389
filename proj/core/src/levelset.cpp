#include "fraclab/levelset.hpp"

#include "fraclab/errors.hpp"
#include "fraclab/gradient.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fraclab {

LevelSetField build_level_set(const Deformation& def, const Grid& grid) {
    if (def.epsilon <= 0.0)
        throw ConfigError("level set requires a positive shell width epsilon");

    LevelSetField field;
    field.epsilon = def.epsilon;
    field.h.assign(static_cast<std::size_t>(grid.cells), 0.0);
    field.gx.assign(static_cast<std::size_t>(grid.cells), 0.0);
    field.gy.assign(static_cast<std::size_t>(grid.cells), 0.0);

    for (int i = 0; i < grid.cells; ++i) {
        const double x = grid.node_x(i);
        double dist = std::min(x, grid.extent[0] - x);
        if (grid.dim == 2) {
            const double y = grid.node_y(i);
            dist = std::min(dist, std::min(y, grid.extent[1] - y));
        }
        field.h[static_cast<std::size_t>(i)] =
            std::min(dist / def.epsilon, 1.0);
    }

    // Facewise difference quotients with zero ghosts are exact here: the
    // level vanishes on the boundary, so the ghost value is the true trace.
    const FaceGradient fg = discrete_gradient(grid, field.h);
    for (std::size_t f = 0; f < grid.faces.size(); ++f) {
        const Face& face = grid.faces[f];
        std::vector<double>& comp = (face.axis == 0) ? field.gx : field.gy;
        const double half = 0.5 * fg.value[f];
        if (face.from >= 0) comp[static_cast<std::size_t>(face.from)] += half;
        if (face.to >= 0) comp[static_cast<std::size_t>(face.to)] += half;
    }
    return field;
}

CutoffFamily build_cutoffs(const LevelSetField& level, const Grid& grid,
                           const std::vector<int>& k_list) {
    if (k_list.empty())
        throw ConfigError("cutoff family requires at least one sharpness k");
    for (std::size_t i = 0; i < k_list.size(); ++i) {
        if (k_list[i] < 1)
            throw ConfigError("cutoff sharpness must be a positive integer, "
                              "got " +
                              std::to_string(k_list[i]));
        if (i > 0 && k_list[i] <= k_list[i - 1])
            throw ConfigError("cutoff sharpness list must be strictly "
                              "increasing");
    }
    if (level.h.size() != static_cast<std::size_t>(grid.cells))
        throw ConfigError("level set field does not match the grid");

    CutoffFamily family;
    family.members.reserve(k_list.size());
    for (int k : k_list) {
        CutoffMember m;
        m.k = k;
        m.xi.resize(level.h.size());
        double defect = 0.0;
        for (std::size_t i = 0; i < level.h.size(); ++i) {
            const double one_minus = std::exp(-static_cast<double>(k) *
                                              level.h[i]);
            m.xi[i] = 1.0 - one_minus;
            defect += one_minus * one_minus;
        }
        m.l2_one_minus_xi = defect * grid.cell_volume;
        m.l2_grad_xi = gradient_norm_sq(grid, discrete_gradient(grid, m.xi));
        family.members.push_back(std::move(m));
    }
    return family;
}

} // namespace fraclab
