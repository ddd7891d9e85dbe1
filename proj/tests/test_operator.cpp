#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/operator_family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

using namespace bnspde;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form eigenvalues of the constant-coefficient zero-flux stencil:
// mu_k = -(4/h^2) sin^2(k pi h / 2), k = 0..n-1.
double stencil_eigenvalue(int k, int n) {
    const double h = 1.0 / n;
    const double s = std::sin(0.5 * k * kPi * h);
    return -4.0 / (h * h) * s * s;
}

// Matching eigenvector samples at cell centers.
Vec stencil_eigenvector(int k, int n) {
    Vec v(n);
    const double h = 1.0 / n;
    for (int i = 0; i < n; ++i) v[i] = std::cos(k * kPi * (i + 0.5) * h);
    return v;
}

Vec random_vec(int n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = nd(gen);
    return v;
}

} // namespace

TEST_CASE("constant-coefficient stencil rows are exact at n = 4") {
    Grid g = make_grid(1, 4);
    SpMat A = assemble(constant_coeffs(1.0), g, 0.0);
    Mat D = Mat(A);
    // h = 1/4 so 1/h^2 = 16; interior rows (16, -32, 16), end rows (-16, 16).
    Mat expect(4, 4);
    expect << -16, 16, 0, 0, 16, -32, 16, 0, 0, 16, -32, 16, 0, 0, 16, -16;
    CHECK((D - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constants are in the kernel up to the zeroth-order term") {
    SUBCASE("constant coefficients, exact") {
        Grid g = make_grid(1, 64);
        SpMat A0 = assemble(constant_coeffs(2.0, 0.0), g, 0.0);
        SpMat A3 = assemble(constant_coeffs(2.0, 3.0), g, 0.0);
        Vec ones = Vec::Ones(g.num_interior());
        CHECK((A0 * ones).cwiseAbs().maxCoeff() == 0.0);
        CHECK(((A3 * ones) - 3.0 * ones).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("variable coefficients, near machine precision") {
        Grid g = make_grid(2, 12);
        SpMat A = assemble(sin_space_coeffs(2.5), g, 0.0);
        Vec ones = Vec::Ones(g.num_interior());
        CHECK(((A * ones) - 2.5 * ones).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("discrete cosine modes are exact eigenvectors in 1d") {
    const int n = 64;
    Grid g = make_grid(1, n);
    SpMat A = assemble(constant_coeffs(1.0), g, 0.0);
    for (int k : {0, 1, 3, 7, 31}) {
        Vec v = stencil_eigenvector(k, n);
        const double mu = stencil_eigenvalue(k, n);
        CHECK((A * v - mu * v).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("dense spectrum matches the closed form and the continuum limit") {
    const int n = 256;
    Grid g = make_grid(1, n);
    OperatorFamily fam(g, constant_coeffs(1.0), 1.0);
    const SpectralData& sd = fam.spectral(0.0);
    REQUIRE(sd.eigenvalues.size() == n);

    // Full multiset against the closed form.
    std::vector<double> expect(n);
    for (int k = 0; k < n; ++k) expect[k] = stencil_eigenvalue(k, n);
    std::sort(expect.begin(), expect.end());
    // Absolute tolerance scaled to the stencil norm 4/h^2 ~ 2.6e5 (the dense
    // eigensolver is backward stable, not exact).
    for (int i = 0; i < n; ++i) CHECK(std::abs(sd.eigenvalues[i] - expect[i]) < 1e-6);

    // Low modes approach -(k pi)^2 to second order.
    for (int k = 1; k <= 5; ++k) {
        const double continuum = -(k * kPi) * (k * kPi);
        CHECK(std::abs(sd.eigenvalues[n - 1 - k] - continuum) < 0.02 * std::abs(continuum));
    }

    // Eigenvectors are Euclid-orthonormal.
    Mat gram = sd.eigenvectors.transpose() * sd.eigenvectors;
    CHECK((gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);

    CHECK(fam.max_eigenvalue(0.0) == doctest::Approx(0.0).epsilon(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("2d spectrum is the tensor sum of 1d spectra") {
    const int n = 8;
    Grid g = make_grid(2, n);
    OperatorFamily fam(g, constant_coeffs(1.0), 1.0);
    const SpectralData& sd = fam.spectral(0.0);
    std::vector<double> expect;
    for (int ky = 0; ky < n; ++ky)
        for (int kx = 0; kx < n; ++kx)
            expect.push_back(stencil_eigenvalue(kx, n) + stencil_eigenvalue(ky, n));
    std::sort(expect.begin(), expect.end());
    REQUIRE(sd.eigenvalues.size() == n * n);
    for (int i = 0; i < n * n; ++i)
        CHECK(std::abs(sd.eigenvalues[i] - expect[i]) < 1e-8);
}

TEST_CASE("assembly is symmetric and dissipative for variable coefficients") {
    Grid g = make_grid(2, 12);
    SpMat A = assemble(sin_space_coeffs(), g, 0.25);
    Mat D = Mat(A);
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    OperatorFamily fam(g, sin_space_coeffs(), 1.0);
    CHECK(fam.max_eigenvalue(0.25) < 1e-10);
}

TEST_CASE("zeroth-order term shifts the diagonal exactly") {
    Grid g = make_grid(1, 64);
    Mat A0 = Mat(assemble(constant_coeffs(1.0, 0.0), g, 0.0));
    Mat A1 = Mat(assemble(constant_coeffs(1.0, 1.0), g, 0.0));
    CHECK((A1 - A0 - Mat::Identity(64, 64)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembly rejects non-elliptic coefficients with a located message") {
    Grid g = make_grid(1, 16);
    // a(x) = 0.5 - x turns non-positive at x >= 1/2.
    CHECK_THROWS_WITH_AS(assemble(affine_space_coeffs(0.5, -1.0), g, 0.0),
                         doctest::Contains("x = "), std::domain_error);
    Grid g2 = make_grid(2, 8);
    CHECK_THROWS_AS(assemble(affine_space_coeffs(0.25, -1.0), g2, 0.0), std::domain_error);
}

TEST_CASE("resolvent solves are accurate and obey the sectorial bound") {
    Grid g = make_grid(1, 128);
    OperatorFamily fam(g, sin_space_coeffs(), 1.0);
    Vec rhs = random_vec(g.num_interior(), 7u);
    for (double lambda : {1.0, 10.0, 100.0, 1e4}) {
        Vec x = fam.resolvent_apply(0.0, lambda, rhs);
        SpMat A = fam.matrix(0.0);
        Vec residual = lambda * x - A * x - rhs;
        CHECK(residual.norm() < 1e-10 * rhs.norm());
        // || (lambda - A)^{-1} || <= K / lambda with K <= 2 (here K = 1:
        // the spectrum is non-positive).
        CHECK(lp_norm(g, x, 2.0) <= 2.0 / lambda * lp_norm(g, rhs, 2.0));
    }
    SUBCASE("constant right-hand side is mapped exactly") {
        Grid gc = make_grid(1, 32);
        OperatorFamily famc(gc, constant_coeffs(1.0), 1.0);
        Vec ones = Vec::Ones(32);
        Vec x = famc.resolvent_apply(0.0, 4.0, 4.0 * ones);
        CHECK((x - ones).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("singular shift is rejected") {
        // a0 = 0 leaves constants in the kernel, so lambda = 0 is singular.
        Grid gc = make_grid(1, 32);
        OperatorFamily famc(gc, constant_coeffs(1.0), 1.0);
        CHECK_THROWS_AS(famc.resolvent_apply(0.0, 0.0, Vec::Ones(32)), std::domain_error);
    }
}

TEST_CASE("prepared and ad-hoc solve paths agree") {
    Grid g = make_grid(1, 96);
    const double dt = 0.01;
    OperatorFamily prepared(g, sin_space_coeffs(), 5.0);
    prepared.prepare({0.0, 0.5}, dt);
    OperatorFamily adhoc(g, sin_space_coeffs(), 5.0);
    Vec rhs = random_vec(g.num_interior(), 11u);

    for (double t : {0.0, 0.5}) {
        Vec xp = prepared.step_solve(t, dt, rhs);
        Vec xa = adhoc.step_solve(t, dt, rhs);
        CHECK((xp - xa).norm() < 1e-10 * rhs.norm());
        SpMat A = prepared.matrix(t);
        CHECK((xp - dt * (A * xp) - rhs).norm() < 1e-10 * rhs.norm());

        Vec yp = prepared.shifted_solve(t, rhs);
        Vec ya = adhoc.shifted_solve(t, rhs);
        CHECK((yp - ya).norm() < 1e-10 * rhs.norm());
        CHECK((5.0 * yp - A * yp - rhs).norm() < 1e-10 * rhs.norm());
    }
    CHECK_THROWS_AS(prepared.prepare({1.0}, dt), std::logic_error);
}

TEST_CASE("fractional powers form a semigroup in theta") {
    Grid g = make_grid(1, 64);
    OperatorFamily fam(g, constant_coeffs(1.0), 1.0); // shift 1, spectrum <= 0
    Vec f = random_vec(64, 3u);

    SUBCASE("theta = 0 is the identity") {
        CHECK((fam.fractional_power_apply(0.0, 0.0, f) - f).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("theta = 1 matches the direct matrix action") {
        Vec direct = f - fam.matrix(0.0) * f; // (shift - A) f with shift = 1
        Vec viaspec = fam.fractional_power_apply(0.0, 1.0, f);
        CHECK((viaspec - direct).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("half power applied twice is the full power") {
        Vec half = fam.fractional_power_apply(0.0, 0.5, f);
        Vec twice = fam.fractional_power_apply(0.0, 0.5, half);
        Vec full = fam.fractional_power_apply(0.0, 1.0, f);
        CHECK((twice - full).cwiseAbs().maxCoeff() < 1e-9 * full.cwiseAbs().maxCoeff());
    }
    SUBCASE("theta = -1 inverts theta = 1") {
        Vec roundtrip = fam.fractional_power_apply(0.0, -1.0, fam.fractional_power_apply(0.0, 1.0, f));
        CHECK((roundtrip - f).cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("eigenmode norms follow the scalar power law") {
        for (int k : {1, 5, 17}) {
            Vec v = stencil_eigenvector(k, 64);
            const double nu = 1.0 - stencil_eigenvalue(k, 64);
            for (double eta : {0.25, 0.5, 1.0}) {
                const double ratio = fam.fractional_norm(0.0, eta, v, 2.0) / lp_norm(g, v, 2.0);
                CHECK(ratio == doctest::Approx(std::pow(nu, eta)).epsilon(1e-8));
            }
        }
    }
    SUBCASE("norms are monotone in eta when the gap is at least one") {
        CHECK(fam.fractional_norm(0.0, 0.3, f, 2.0) <=
              fam.fractional_norm(0.0, 0.7, f, 2.0) + 1e-12);
    }
    SUBCASE("range errors") {
        CHECK_THROWS_AS(fam.fractional_power_apply(0.0, 1.5, f), std::invalid_argument);
        CHECK_THROWS_AS(fam.fractional_norm(0.0, -0.1, f, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(fam.fractional_norm(0.0, 1.1, f, 2.0), std::invalid_argument);
    }
    SUBCASE("spectrum above the shift is rejected") {
        // a0 = 1 lifts the top eigenvalue to 1, strictly above shift 0.
        OperatorFamily flat(g, constant_coeffs(1.0, 1.0), 0.0);
        CHECK_THROWS_AS(flat.fractional_power_apply(0.0, 0.5, f), std::domain_error);
    }
}

TEST_CASE("dense spectral decomposition enforces the desk-scale guard") {
    Grid g = make_grid(2, 128);
    OperatorFamily fam(g, constant_coeffs(1.0), 1.0);
    CHECK_THROWS_AS(fam.spectral(0.0), std::invalid_argument);
}

TEST_CASE("triplet export reproduces the matrix") {
    Grid g = make_grid(1, 8);
    OperatorFamily fam(g, sin_space_coeffs(0.5), 1.0);
    std::ostringstream os;
    fam.export_triplets(0.0, os);
    std::istringstream is(os.str());
    std::vector<Eigen::Triplet<double>> trip;
    int r, c;
    double v;
    while (is >> r >> c >> v) trip.emplace_back(r, c, v);
    CHECK(trip.size() == 3u * 8u - 2u);
    SpMat B(8, 8);
    B.setFromTriplets(trip.begin(), trip.end());
    CHECK((Mat(B) - Mat(fam.matrix(0.0))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time-dependent assembly tracks the coefficient in time") {
    Grid g = make_grid(1, 32);
    CoefficientField cf = time_hoelder_coeffs(0.75);
    OperatorFamily fam(g, cf, 1.0);
    // a(t) = 1 + 0.25 |sin(2 pi t)|^mu is space-constant, so A(t) = a(t) L
    // with L the unit stencil.
    SpMat L = assemble(constant_coeffs(1.0), g, 0.0);
    for (double t : {0.0, 0.13, 0.25, 0.77}) {
        const double at = cf.a_value(t, 0.3, 0.0);
        CHECK((Mat(fam.matrix(t)) - at * Mat(L)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("assumption audit accepts honest claims and rejects false ones") {
    SUBCASE("sinusoidal diffusion has infimum one half") {
        AssumptionReport r = validate_assumptions(sin_space_coeffs(), 16, 4096, 1);
        CHECK(r.kappa_fitted == doctest::Approx(0.5).epsilon(5e-3));
        CHECK(r.kappa_pass);
        CHECK(r.hoelder_pass); // time-constant: trivially Hoelder
        CHECK(r.pass);
        CHECK(r.detail.find("time-constant") != std::string::npos);
    }
    SUBCASE("genuinely Hoelder-in-time field fits its exponent") {
        AssumptionReport r = validate_assumptions(time_hoelder_coeffs(0.6), 512, 64, 1);
        CHECK(r.hoelder_exponent == doctest::Approx(0.6).epsilon(0.15));
        CHECK(r.hoelder_pass);
        CHECK(r.pass);
    }
    SUBCASE("jump-in-time field fails the Hoelder audit") {
        AssumptionReport r = validate_assumptions(time_step_coeffs(), 512, 64, 1);
        CHECK_FALSE(r.hoelder_pass);
        CHECK_FALSE(r.pass);
        CHECK(r.hoelder_exponent < 0.2);
    }
    SUBCASE("degenerate coefficient fails the ellipticity audit") {
        CoefficientField cf = affine_space_coeffs(0.5, -1.0);
        cf.kappa_claim = 0.1;
        AssumptionReport r = validate_assumptions(cf, 16, 4096, 1);
        CHECK_FALSE(r.kappa_pass);
        CHECK_FALSE(r.pass);
    }
    SUBCASE("sample floor is enforced") {
        CHECK_THROWS_AS(validate_assumptions(sin_space_coeffs(), 4, 4096, 1), std::invalid_argument);
    }
}
