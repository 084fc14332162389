#include "fraclab/deformation.hpp"

#include "fraclab/errors.hpp"

#include <cmath>
#include <set>
#include <string>

namespace fraclab {

double Shell::weight_sum() const {
    double acc = 0.0;
    for (const ShellNode& n : nodes) acc += n.weight;
    return acc;
}

const Shell& Deformation::shell_for(double tau) const {
    for (const Shell& s : shells)
        if (s.tau == tau) return s;
    throw ConfigError("no shell was built for tau = " + std::to_string(tau));
}

namespace {

Shell build_shell_1d(const Grid& g, double epsilon, double tau) {
    Shell s;
    s.tau = tau;
    s.offset = epsilon * tau;
    const double X = g.extent[0];
    s.nodes.push_back({s.offset, 0.0, -1.0, 0.0, 1.0});
    s.nodes.push_back({X - s.offset, 0.0, 1.0, 0.0, 1.0});
    return s;
}

Shell build_shell_2d(const Grid& g, double epsilon, double tau) {
    Shell s;
    s.tau = tau;
    s.offset = epsilon * tau;
    const double X = g.extent[0];
    const double Y = g.extent[1];
    const double d = s.offset;
    const double res = g.min_h();

    // The shell is the rectangle [d, X-d] x [d, Y-d]; each side is split
    // into segments of roughly one grid spacing with midpoint nodes, so the
    // corner points never carry quadrature weight and the weights sum to
    // the exact shell perimeter.
    auto add_side = [&](double ax, double ay, double bx, double by, double nx, double ny) {
        const double len = std::hypot(bx - ax, by - ay);
        const int m = std::max(1, static_cast<int>(std::ceil(len / res)));
        const double seg = len / m;
        for (int i = 0; i < m; ++i) {
            const double t = (i + 0.5) / m;
            s.nodes.push_back({ax + t * (bx - ax), ay + t * (by - ay), nx, ny, seg});
        }
    };
    add_side(d, d, X - d, d, 0.0, -1.0);         // bottom, outward normal -y
    add_side(d, Y - d, X - d, Y - d, 0.0, 1.0);  // top
    add_side(d, d, d, Y - d, -1.0, 0.0);         // left
    add_side(X - d, d, X - d, Y - d, 1.0, 0.0);  // right
    return s;
}

} // namespace

Deformation build_deformation(const Grid& grid, double epsilon,
                              const std::vector<double>& tau_list) {
    if (!(epsilon > 0.0))
        throw ConfigError("build_deformation: epsilon must be positive, got " +
                          std::to_string(epsilon));
    if (tau_list.empty()) throw ConfigError("build_deformation: the tau list is empty");

    double min_extent = grid.extent[0];
    if (grid.dim == 2) min_extent = std::min(min_extent, grid.extent[1]);
    std::set<double> seen;
    for (double tau : tau_list) {
        if (tau < 0.0)
            throw ConfigError("build_deformation: tau must be nonnegative, got " +
                              std::to_string(tau));
        if (!seen.insert(tau).second)
            throw ConfigError("build_deformation: duplicate tau " + std::to_string(tau) +
                              " would build coincident shells");
        if (epsilon * tau >= 0.5 * min_extent)
            throw ConfigError("build_deformation: offset epsilon*tau = " +
                              std::to_string(epsilon * tau) +
                              " reaches half the smallest extent " +
                              std::to_string(min_extent) + "; opposite shells collide");
    }

    Deformation def;
    def.epsilon = epsilon;
    for (double tau : tau_list)
        def.shells.push_back(grid.dim == 1 ? build_shell_1d(grid, epsilon, tau)
                                           : build_shell_2d(grid, epsilon, tau));
    return def;
}

} // namespace fraclab
