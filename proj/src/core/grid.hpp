#pragma once
// Structured cell-centered grids on the interval (0,1) and the square (0,1)^2,
// with discrete inner products, Lp norms, trace extraction, and boundary
// quadrature. Interior unknowns live at cell centers; boundary data lives at
// boundary-face centers, ordered as a single arc-length loop in 2D.

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace bnspde {

using Vec = Eigen::VectorXd;

struct Grid {
    int dim = 1;          // 1 or 2
    int n = 0;            // cells per axis
    double h = 0.0;       // 1/n

    // Quadrature weights (volume measure for cells, surface measure for faces).
    Vec interior_weights; // size n (1D) or n*n (2D), all equal to h^dim
    Vec boundary_weights; // size 2 (1D, weights 1) or 4n (2D, weights h)

    int num_interior() const { return dim == 1 ? n : n * n; }
    int num_boundary() const { return dim == 1 ? 2 : 4 * n; }

    // Flattened interior index for 2D cell (ix, iy): iy*n + ix.
    int cell_index(int ix, int iy) const { return iy * n + ix; }

    // Coordinates of interior node i (y coordinate is 0 in 1D).
    std::array<double, 2> interior_coord(int i) const;

    // Boundary nodes in canonical order.
    // 1D: node 0 at s=0, node 1 at s=1.
    // 2D: a single loop of the 4n boundary-face centers with arc-length
    // parameter theta_j = (j + 1/2) h in [0,4): bottom edge left-to-right,
    // right edge bottom-to-top, top edge right-to-left, left edge top-to-bottom.
    std::array<double, 2> boundary_coord(int j) const;
    double boundary_arc(int j) const { return dim == 1 ? (j == 0 ? 0.0 : 1.0) : (j + 0.5) * h; }

    // Interior cell adjacent to boundary node j, and the next cell inward
    // along the inner normal (used by trace extrapolation and flux injection).
    int boundary_adjacent_cell(int j) const;
    int boundary_second_cell(int j) const;
};

// Construction; throws std::invalid_argument on dimension not in {1,2} or n < 4.
Grid make_grid(int dimension, int n_per_axis);

// Weighted inner product <f,g>_w = sum_i w_i f_i g_i over interior nodes.
double wdot(const Grid& g, const Vec& f, const Vec& v);

// Weighted discrete Lp norm (sum_i w_i |f_i|^p)^(1/p); max norm for p = inf.
// Throws std::invalid_argument for p < 1.
double lp_norm(const Grid& g, const Vec& f, double p);

// Surface-measure-weighted pairing of boundary data.
double boundary_dot(const Grid& g, const Vec& y1, const Vec& y2);

// Boundary trace of an interior field by one-sided extrapolation to the
// boundary-face center: (3 f_adj - f_inward) / 2, exact on affine profiles.
Vec trace(const Grid& g, const Vec& f);

} // namespace bnspde
