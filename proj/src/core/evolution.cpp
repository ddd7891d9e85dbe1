#include "core/evolution.hpp"

#include "core/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace bnspde {

std::vector<double> SteppingLattice::times() const {
    std::vector<double> ts(M + 1);
    for (int k = 0; k <= M; ++k) ts[k] = time(k);
    return ts;
}

SteppingLattice make_lattice(double T, int M) {
    if (!(T > 0.0)) throw std::invalid_argument("lattice: horizon T must be positive");
    if (M < 2) throw std::invalid_argument("lattice: step count M must be at least 2");
    return SteppingLattice{T, M};
}

Vec propagate(const OperatorFamily& family, const SteppingLattice& lattice, int s_index,
              int t_index, Vec x) {
    if (s_index < 0 || t_index > lattice.M || s_index > t_index)
        throw std::invalid_argument("propagate: need 0 <= s_index <= t_index <= M");
    const double dt = lattice.dt();
    for (int k = s_index; k < t_index; ++k) x = family.step_solve(lattice.time(k + 1), dt, x);
    return x;
}

SmoothingReport smoothing_probe(const OperatorFamily& family, const SteppingLattice& lattice,
                                double alpha, double beta, int random_samples, uint64_t seed) {
    if (!(0.0 <= beta && beta <= alpha && alpha <= 1.0))
        throw std::invalid_argument("smoothing_probe: need 0 <= beta <= alpha <= 1");
    if (lattice.M < 8) throw std::invalid_argument("smoothing_probe: need M >= 8");

    const Grid& g = family.grid();
    const int N = g.num_interior();
    const SpectralData& sd = family.spectral(0.0);

    std::vector<Vec> samples;
    for (int i = 0; i < N; ++i) samples.push_back(sd.eigenvectors.col(i));
    for (int r = 0; r < random_samples; ++r) {
        Vec x(N);
        for (int i = 0; i < N; ++i) x[i] = normal_draw(seed, kStreamAux, r, 0, i);
        samples.push_back(x);
    }

    std::vector<int> steps;
    if (alpha == beta) steps.push_back(0);
    for (int l : {8, 16, 32, 64, 128})
        if (l <= lattice.M) steps.push_back(l);

    SmoothingReport rep;
    for (int l : steps) {
        const double t = lattice.time(l);
        double worst = 0.0;
        for (const Vec& x : samples) {
            const double denom = family.fractional_norm(0.0, beta, x, 2.0);
            if (denom <= 0.0) continue;
            Vec px = propagate(family, lattice, 0, l, x);
            worst = std::max(worst, family.fractional_norm(t, alpha, px, 2.0) / denom);
        }
        rep.lags.push_back(t);
        rep.worst_ratio.push_back(worst);
        const double weight = l == 0 ? 1.0 : std::pow(t, alpha - beta);
        rep.fitted_C = std::max(rep.fitted_C, worst * weight);
    }

    // Log-log slope over the positive lags.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < rep.lags.size(); ++i) {
        if (rep.lags[i] <= 0.0 || rep.worst_ratio[i] <= 0.0) continue;
        const double lx = std::log(rep.lags[i]), ly = std::log(rep.worst_ratio[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m >= 2) rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return rep;
}

} // namespace bnspde
