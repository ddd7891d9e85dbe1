#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/evolution.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace bnspde;

namespace {

constexpr double kPi = std::numbers::pi;

Vec cos_mode(const Grid& g, int k) {
    Vec v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = std::cos(k * kPi * (i + 0.5) * g.h);
    return v;
}

// Max node error of the propagated cosine against the separated-variables
// heat profile e^{-pi^2 t} cos(pi s).
double heat_error(int n, int M, double T) {
    Grid g = make_grid(1, n);
    OperatorFamily fam(g, constant_coeffs(1.0), 1.0);
    SteppingLattice lat = make_lattice(T, M);
    fam.prepare(lat.times(), lat.dt());
    Vec u = propagate(fam, lat, 0, M, cos_mode(g, 1));
    const double decay = std::exp(-kPi * kPi * T);
    double err = 0.0;
    for (int i = 0; i < n; ++i)
        err = std::max(err, std::abs(u[i] - decay * std::cos(kPi * (i + 0.5) * g.h)));
    return err;
}

} // namespace

TEST_CASE("lattice construction and validation") {
    SteppingLattice lat = make_lattice(2.0, 8);
    CHECK(lat.dt() == 0.25);
    CHECK(lat.time(3) == 0.75);
    CHECK(lat.times().size() == 9);
    CHECK_THROWS_AS(make_lattice(0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_lattice(1.0, 1), std::invalid_argument);
}

TEST_CASE("propagation basics") {
    Grid g = make_grid(1, 32);
    OperatorFamily fam(g, constant_coeffs(1.0), 1.0);
    SteppingLattice lat = make_lattice(1.0, 16);
    Vec x(32);
    for (int i = 0; i < 32; ++i) x[i] = std::sin(7.0 * i);

    SUBCASE("coincident endpoints return the input unchanged") {
        Vec y = propagate(fam, lat, 5, 5, x);
        CHECK((y - x).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("constants are preserved to machine precision") {
        Vec u = propagate(fam, lat, 0, 16, Vec::Ones(32));
        CHECK((u - Vec::Ones(32)).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("index validation") {
        CHECK_THROWS_AS(propagate(fam, lat, 3, 2, x), std::invalid_argument);
        CHECK_THROWS_AS(propagate(fam, lat, 0, 17, x), std::invalid_argument);
    }
}

TEST_CASE("heat profile matches the separated-variables oracle") {
    const double err = heat_error(256, 512, 0.1);
    CHECK(err <= 0.01);
    CHECK(err > 0.0);
}

TEST_CASE("temporal accuracy is first order against the oracle") {
    std::vector<double> errs;
    for (int M : {256, 512, 1024}) errs.push_back(heat_error(512, M, 0.1));
    const double o1 = std::log2(errs[0] / errs[1]);
    const double o2 = std::log2(errs[1] / errs[2]);
    CHECK(o1 >= 0.9);
    CHECK(o1 <= 1.2);
    CHECK(o2 >= 0.9);
    CHECK(o2 <= 1.2);
}

TEST_CASE("evolution law composes bit-for-bit on lattice points") {
    Grid g = make_grid(1, 48);
    OperatorFamily fam(g, time_hoelder_coeffs(0.75), 1.0);
    SteppingLattice lat = make_lattice(0.5, 32);
    fam.prepare(lat.times(), lat.dt());
    Vec x(48);
    for (int i = 0; i < 48; ++i) x[i] = std::cos(3.0 * i) + 0.25;
    Vec direct = propagate(fam, lat, 0, 32, x);
    Vec composed = propagate(fam, lat, 20, 32, propagate(fam, lat, 0, 20, x));
    CHECK((direct - composed).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shifted stepping is an L2 contraction") {
    Grid g = make_grid(1, 64);
    OperatorFamily fam(g, constant_coeffs(1.0, -1.0), 0.0); // absorbed shift
    SteppingLattice lat = make_lattice(1.0, 64);
    fam.prepare(lat.times(), lat.dt());
    std::mt19937_64 gen(17);
    std::normal_distribution<double> nd;
    Vec u(64);
    for (int i = 0; i < 64; ++i) u[i] = nd(gen);
    double prev = lp_norm(g, u, 2.0);
    for (int k = 0; k < 64; ++k) {
        u = propagate(fam, lat, k, k + 1, u);
        const double cur = lp_norm(g, u, 2.0);
        CHECK(cur <= prev * (1.0 + 1e-14));
        prev = cur;
    }
}

TEST_CASE("smoothing probe reproduces the spectral decay exponents") {
    Grid g = make_grid(1, 128);
    OperatorFamily fam(g, constant_coeffs(1.0), 1.0);
    SteppingLattice lat = make_lattice(1.0, 1024);
    fam.prepare(lat.times(), lat.dt());

    SUBCASE("alpha = beta pins C at the identity bound") {
        SmoothingReport rep = smoothing_probe(fam, lat, 0.0, 0.0, 4, 11u);
        CHECK(rep.fitted_C >= 1.0 - 1e-6);
        CHECK(rep.fitted_C < 1.5);
    }
    SUBCASE("half-power smoothing decays with slope -1/2") {
        SmoothingReport rep = smoothing_probe(fam, lat, 0.5, 0.0, 4, 11u);
        CHECK(rep.slope == doctest::Approx(-0.5).epsilon(0.1)); // +- 0.05
        CHECK(rep.fitted_C > 0.0);
    }
    SUBCASE("full-power smoothing decays with slope -1") {
        SmoothingReport rep = smoothing_probe(fam, lat, 1.0, 0.0, 4, 11u);
        CHECK(rep.slope == doctest::Approx(-1.0).epsilon(0.1)); // +- 0.1
    }
    SUBCASE("worst ratio matches the exact discrete operator norm") {
        SmoothingReport rep = smoothing_probe(fam, lat, 0.5, 0.0, 0, 11u);
        const SpectralData& sd = fam.spectral(0.0);
        const double dtv = lat.dt();
        for (size_t li = 0; li < rep.lags.size(); ++li) {
            const int l = static_cast<int>(std::round(rep.lags[li] / dtv));
            double oracle = 0.0;
            for (int i = 0; i < sd.eigenvalues.size(); ++i) {
                const double mu = sd.eigenvalues[i];
                oracle = std::max(oracle,
                                  std::pow(1.0 - dtv * mu, -double(l)) * std::sqrt(1.0 - mu));
            }
            CHECK(rep.worst_ratio[li] == doctest::Approx(oracle).epsilon(1e-6));
        }
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(smoothing_probe(fam, lat, 0.2, 0.5, 1, 0u), std::invalid_argument);
        SteppingLattice tiny = make_lattice(1.0, 4);
        CHECK_THROWS_AS(smoothing_probe(fam, tiny, 0.5, 0.0, 1, 0u), std::invalid_argument);
    }
}
