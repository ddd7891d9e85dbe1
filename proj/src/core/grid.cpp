#include "core/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace bnspde {

std::array<double, 2> Grid::interior_coord(int i) const {
    if (dim == 1) return {(i + 0.5) * h, 0.0};
    const int ix = i % n, iy = i / n;
    return {(ix + 0.5) * h, (iy + 0.5) * h};
}

std::array<double, 2> Grid::boundary_coord(int j) const {
    if (dim == 1) return {j == 0 ? 0.0 : 1.0, 0.0};
    const int t = j % n;
    const double c = (t + 0.5) * h;
    switch (j / n) {
        case 0: return {c, 0.0};        // bottom
        case 1: return {1.0, c};        // right
        case 2: return {1.0 - c, 1.0};  // top, right-to-left
        default: return {0.0, 1.0 - c}; // left, top-to-bottom
    }
}

int Grid::boundary_adjacent_cell(int j) const {
    if (dim == 1) return j == 0 ? 0 : n - 1;
    const int t = j % n;
    switch (j / n) {
        case 0: return cell_index(t, 0);
        case 1: return cell_index(n - 1, t);
        case 2: return cell_index(n - 1 - t, n - 1);
        default: return cell_index(0, n - 1 - t);
    }
}

int Grid::boundary_second_cell(int j) const {
    if (dim == 1) return j == 0 ? 1 : n - 2;
    const int t = j % n;
    switch (j / n) {
        case 0: return cell_index(t, 1);
        case 1: return cell_index(n - 2, t);
        case 2: return cell_index(n - 1 - t, n - 2);
        default: return cell_index(1, n - 1 - t);
    }
}

Grid make_grid(int dimension, int n_per_axis) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("make_grid: dimension must be 1 or 2");
    if (n_per_axis < 4)
        throw std::invalid_argument("make_grid: n_per_axis must be >= 4");
    Grid g;
    g.dim = dimension;
    g.n = n_per_axis;
    g.h = 1.0 / n_per_axis;
    const double cellw = dimension == 1 ? g.h : g.h * g.h;
    g.interior_weights = Vec::Constant(g.num_interior(), cellw);
    g.boundary_weights = Vec::Constant(g.num_boundary(), dimension == 1 ? 1.0 : g.h);
    return g;
}

double wdot(const Grid& g, const Vec& f, const Vec& v) {
    return (g.interior_weights.array() * f.array() * v.array()).sum();
}

double lp_norm(const Grid& g, const Vec& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) return f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    if (p == 2.0) return std::sqrt((g.interior_weights.array() * f.array().square()).sum());
    // Small even integer exponents stay on the vectorized multiply path
    // instead of dropping to per-element pow (these norms sit inside the
    // increment-estimation hot loop).
    if (p == 4.0) {
        const double s = (g.interior_weights.array() * f.array().square().square()).sum();
        return std::pow(s, 0.25);
    }
    if (p == 6.0) {
        const auto sq = f.array().square();
        const double s = (g.interior_weights.array() * sq * sq * sq).sum();
        return std::pow(s, 1.0 / 6.0);
    }
    const double s = (g.interior_weights.array() * f.array().abs().pow(p)).sum();
    return std::pow(s, 1.0 / p);
}

double boundary_dot(const Grid& g, const Vec& y1, const Vec& y2) {
    return (g.boundary_weights.array() * y1.array() * y2.array()).sum();
}

Vec trace(const Grid& g, const Vec& f) {
    Vec out(g.num_boundary());
    for (int j = 0; j < g.num_boundary(); ++j)
        out[j] = 1.5 * f[g.boundary_adjacent_cell(j)] - 0.5 * f[g.boundary_second_cell(j)];
    return out;
}

} // namespace bnspde
