#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/grid.hpp"

#include <cmath>
#include <numbers>

using namespace bnspde;

TEST_CASE("grid construction basics") {
    Grid g = make_grid(1, 4);
    CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.num_boundary() == 2);
    CHECK(g.boundary_weights[0] == 1.0);
    CHECK(g.boundary_weights[1] == 1.0);

    CHECK_THROWS(make_grid(3, 8));
    CHECK_THROWS(make_grid(0, 8));
    CHECK_THROWS(make_grid(1, 3));
}

TEST_CASE("interior weights partition unity") {
    for (int n : {4, 16, 256}) {
        Grid g = make_grid(1, n);
        CHECK(std::abs(g.interior_weights.sum() - 1.0) <= 1e-12);
    }
    for (int n : {4, 8, 32}) {
        Grid g = make_grid(2, n);
        CHECK(std::abs(g.interior_weights.sum() - 1.0) <= 1e-12);
    }
}

TEST_CASE("boundary weights sum to the perimeter") {
    // Direct summation oracle over the four square edges: each edge carries n
    // faces of width h, so the loop total must be 4*n*h = 4.
    Grid g = make_grid(2, 8);
    double direct = 0.0;
    for (int edge = 0; edge < 4; ++edge)
        for (int t = 0; t < g.n; ++t) direct += g.h;
    CHECK(std::abs(direct - 4.0) <= 1e-12);
    CHECK(std::abs(g.boundary_weights.sum() - direct) <= 1e-12);

    Grid g1 = make_grid(1, 16);
    CHECK(std::abs(g1.boundary_weights.sum() - 2.0) <= 1e-12);
}

TEST_CASE("boundary nodes enumerate the loop once") {
    Grid g = make_grid(2, 8);
    // All 4n face centers distinct and on the boundary of the unit square.
    for (int j = 0; j < g.num_boundary(); ++j) {
        auto [x, y] = g.boundary_coord(j);
        bool on = (x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0);
        CHECK(on);
        for (int k = j + 1; k < g.num_boundary(); ++k) {
            auto [x2, y2] = g.boundary_coord(k);
            CHECK((x != x2 || y != y2));
        }
    }
    // Arc parameter is uniform with spacing h.
    for (int j = 0; j + 1 < g.num_boundary(); ++j)
        CHECK(g.boundary_arc(j + 1) - g.boundary_arc(j) == doctest::Approx(g.h).epsilon(1e-12));
}

TEST_CASE("lp norm of constants") {
    Grid g = make_grid(1, 64);
    Vec one = Vec::Constant(g.num_interior(), 1.0);
    CHECK(lp_norm(g, one, 2.0) == doctest::Approx(1.0).epsilon(1e-13));
    for (double p : {1.0, 2.0, 3.5, 4.0}) {
        Vec c = Vec::Constant(g.num_interior(), -2.5);
        CHECK(lp_norm(g, c, p) == doctest::Approx(2.5).epsilon(1e-12));
    }
    Vec c = Vec::Constant(g.num_interior(), -2.5);
    CHECK(lp_norm(g, c, std::numeric_limits<double>::infinity()) == doctest::Approx(2.5));
    CHECK_THROWS(lp_norm(g, one, 0.5));
}

TEST_CASE("lp norm of the coordinate function") {
    // ||s||_{L^2(0,1)} = 1/sqrt(3); midpoint quadrature is second-order.
    Grid g = make_grid(1, 256);
    Vec f(g.num_interior());
    for (int i = 0; i < g.num_interior(); ++i) f[i] = g.interior_coord(i)[0];
    CHECK(std::abs(lp_norm(g, f, 2.0) - 1.0 / std::sqrt(3.0)) <= 1e-3);
}

TEST_CASE("quadrature exactness for low-degree polynomials") {
    // Midpoint rule integrates degree <= 1 exactly; degree 2 to O(h^2).
    Grid g = make_grid(1, 32);
    Vec lin(g.num_interior()), quad(g.num_interior());
    for (int i = 0; i < g.num_interior(); ++i) {
        double s = g.interior_coord(i)[0];
        lin[i] = 2.0 * s - 0.7;
        quad[i] = s * s;
    }
    double int_lin = (g.interior_weights.array() * lin.array()).sum();
    CHECK(std::abs(int_lin - 0.3) <= 1e-12); // exact: integral of 2s-0.7 = 0.3
    double int_quad = (g.interior_weights.array() * quad.array()).sum();
    CHECK(std::abs(int_quad - 1.0 / 3.0) <= 0.25 * g.h * g.h);

    Grid g2 = make_grid(2, 16);
    Vec bil(g2.num_interior());
    for (int i = 0; i < g2.num_interior(); ++i) {
        auto [x, y] = g2.interior_coord(i);
        bil[i] = x + 3.0 * y - 1.0;
    }
    double int_bil = (g2.interior_weights.array() * bil.array()).sum();
    CHECK(std::abs(int_bil - 1.0) <= 1e-12); // 1/2 + 3/2 - 1
}

TEST_CASE("trace of constants and coordinates") {
    Grid g = make_grid(1, 64);
    Vec one = Vec::Constant(g.num_interior(), 1.0);
    Vec tr = trace(g, one);
    CHECK(tr[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tr[1] == doctest::Approx(1.0).epsilon(1e-14));

    Vec f(g.num_interior());
    for (int i = 0; i < g.num_interior(); ++i) f[i] = g.interior_coord(i)[0];
    Vec trf = trace(g, f);
    // Extrapolation is exact on affine functions.
    CHECK(std::abs(trf[0] - 0.0) <= 1e-13);
    CHECK(std::abs(trf[1] - 1.0) <= 1e-13);
}

TEST_CASE("trace of a coordinate on the square") {
    Grid g = make_grid(2, 8);
    Vec f(g.num_interior());
    for (int i = 0; i < g.num_interior(); ++i) f[i] = g.interior_coord(i)[0]; // s1
    Vec tr = trace(g, f);
    for (int j = 0; j < g.num_boundary(); ++j) {
        auto [x, y] = g.boundary_coord(j);
        (void)y;
        CHECK(std::abs(tr[j] - x) <= 1e-13);
    }
}

TEST_CASE("boundary pairing uses the surface measure") {
    Grid g = make_grid(2, 8);
    Vec one = Vec::Constant(g.num_boundary(), 1.0);
    CHECK(boundary_dot(g, one, one) == doctest::Approx(4.0).epsilon(1e-13));
}
