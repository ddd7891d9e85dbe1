#pragma once
// Deterministic non-autonomous propagation P_h(t,s) by drift-implicit
// (backward Euler) stepping, and numerical probes of the parabolic smoothing
// estimate ||P(t,s)x||_alpha <= C (t-s)^(beta-alpha) ||x||_beta.

#include "core/operator_family.hpp"

#include <cstdint>
#include <vector>

namespace bnspde {

// Uniform time lattice over [0, T] with M backward-Euler steps; the linear
// part freezes coefficients at each step's right endpoint.
struct SteppingLattice {
    double T = 1.0;
    int M = 2;

    double dt() const { return T / M; }
    double time(int k) const { return k * dt(); }
    // All lattice times t_0..t_M (for operator-family preparation).
    std::vector<double> times() const;
};

SteppingLattice make_lattice(double T, int M); // validates T > 0, M >= 2

// Applies (I - dt A_h(t_{k+1}))^{-1} successively for k = s_index..t_index-1.
// s_index == t_index returns x unchanged.
Vec propagate(const OperatorFamily& family, const SteppingLattice& lattice, int s_index,
              int t_index, Vec x);

struct SmoothingReport {
    std::vector<double> lags;        // elapsed times t_l - 0 probed
    std::vector<double> worst_ratio; // sup over samples of the norm ratio at each lag
    double slope = 0.0;              // log-log fit of worst_ratio vs lag
    double fitted_C = 0.0;           // max over lags of ratio * lag^(alpha-beta)
};

// Probes the smoothing estimate from s = 0 over dyadic step lags
// {8, 16, 32, 64, 128} (those <= M). The sample set is every eigenvector of
// A_h(0) plus `random_samples` Gaussian vectors, so the reported worst ratio
// is the exact operator norm in the autonomous symmetric case. For
// alpha == beta the identity lag 0 is included (P(s,s) = I forces C >= 1).
// Requires 0 <= beta <= alpha <= 1 and M >= 8.
SmoothingReport smoothing_probe(const OperatorFamily& family, const SteppingLattice& lattice,
                                double alpha, double beta, int random_samples, uint64_t seed);

} // namespace bnspde
