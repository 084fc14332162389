#include "fraclab/gradient.hpp"

namespace fraclab {

FaceGradient discrete_gradient(const Grid& grid, const std::vector<double>& u) {
    FaceGradient g;
    g.value.resize(grid.faces.size());
    for (std::size_t f = 0; f < grid.faces.size(); ++f) {
        const Face& face = grid.faces[f];
        double d = 0.0;
        if (face.to >= 0) d += u[face.to];
        if (face.from >= 0) d -= u[face.from];
        g.value[f] = d / grid.h[face.axis];
    }
    return g;
}

double gradient_norm_sq(const Grid& grid, const FaceGradient& g) {
    double acc = 0.0;
    for (std::size_t f = 0; f < grid.faces.size(); ++f)
        acc += g.value[f] * g.value[f] * grid.face_measure(grid.faces[f]);
    return acc;
}

} // namespace fraclab
