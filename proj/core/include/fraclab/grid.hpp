#pragma once

#include <string>
#include <vector>

namespace fraclab {

// Cell-centered tensor grid on [0,X] or [0,X]x[0,Y] with homogeneous
// Dirichlet data. Spacing is h = extent/(n+1) per axis, interior nodes sit
// at i*h (i = 1..n), and the Dirichlet zero lives on the physical boundary,
// one full spacing from the adjacent node and half a cell beyond the
// outermost face. Cells of width h are centred on the nodes, so they tile
// [h/2, extent-h/2] and the summed cell volume is prod(extent_a - h_a).
// With this layout the constant-coefficient operator is the classical
// second-difference stencil with the closed-form sine spectrum.

struct Face {
    int axis = 0;      // 0 = x, 1 = y
    int from = -1;     // cell on the low side, -1 for the boundary ghost
    int to = -1;       // cell on the high side, -1 for the boundary ghost
    double area = 1.0; // 1 in 1D, transverse spacing in 2D
    double cx = 0.0;   // face centroid
    double cy = 0.0;

    bool boundary() const { return from < 0 || to < 0; }
};

// Mesh corner where four face differences meet (2D only). An id is -1 when
// the incident face would separate two ghost cells and carries no degrees
// of freedom.
struct Corner {
    int fx_lo = -1; // x-face in the node row below the corner
    int fx_hi = -1; // x-face in the node row above
    int fy_lo = -1; // y-face in the node column left of the corner
    int fy_hi = -1; // y-face in the node column right
    double cx = 0.0;
    double cy = 0.0;
};

struct Grid {
    int dim = 1;
    int n[2] = {0, 0};          // interior nodes per axis
    double extent[2] = {0, 0};
    double h[2] = {0, 0};       // node spacing per axis
    int cells = 0;
    double cell_volume = 0.0;   // uniform across cells
    std::vector<Face> faces;
    std::vector<Corner> corners; // empty in 1D
    int boundary_face_count = 0;

    // 0-based cell id of the 1-based node (i[,j]).
    int cell_id(int i, int j = 1) const { return (i - 1) + (j - 1) * n[0]; }
    double node_x(int cell) const { return (cell % n[0] + 1) * h[0]; }
    double node_y(int cell) const { return dim == 2 ? (cell / n[0] + 1) * h[1] : 0.0; }

    double min_h() const { return dim == 2 && h[1] < h[0] ? h[1] : h[0]; }
    double volume_sum() const { return cells * cell_volume; }

    // Per-axis spacing of the face's two-point difference (uniform: h[axis]).
    double face_spacing(const Face& f) const { return h[f.axis]; }
    // Face measure used by gradient accumulation: area * spacing.
    double face_measure(const Face& f) const { return f.area * h[f.axis]; }

    std::string describe() const;
    std::string to_json() const;
};

// Throws ConfigError listing each offending field when an extent is
// non-positive or a resolution is below 3.
Grid build_grid(int dim, const double* extents, const int* resolution);
Grid build_grid_1d(double extent, int n);
Grid build_grid_2d(double ex, double ey, int nx, int ny);

} // namespace fraclab
