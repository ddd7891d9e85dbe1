#pragma once
// Noise models (spectral covariance, white noise), counter-addressed Wiener
// increments with refinement coupling, finite-rank gamma-norms, covariance
// factorization, and admissibility validators for the catalog noise regimes.

#include "core/grid.hpp"
#include "core/operator_family.hpp" // for Mat
#include "core/rng.hpp"

#include <iosfwd>
#include <string>

namespace bnspde {

enum class NoiseTarget { Interior, Boundary };
enum class NoiseKind { Spectral, White };

// A noise model is either a finite-rank spectral covariance
// Q = sum_n lambda_n e_n (x) e_n with weighted-orthonormal modes, or (in 1D,
// interior only) discrete white noise with per-node variance dt / h.
struct NoiseModel {
    NoiseTarget target = NoiseTarget::Interior;
    NoiseKind kind = NoiseKind::Spectral;
    Mat modes;               // columns e_n; empty for white noise
    Vec lambdas;             // per-mode variances, >= 0; empty for white noise
    double tail_mass = 0.0;  // reported truncation mass beyond the retained modes
    double carrier_exponent = 2.0; // r (interior) or s (boundary)

    int rank() const { return static_cast<int>(lambdas.size()); }
    // True when every increment is identically zero (no modes or all
    // lambda_n = 0); lets callers skip the arithmetic entirely.
    bool is_null() const;
};

// Trivial model: increments are identically zero.
NoiseModel null_noise(NoiseTarget target);

// Interior cosine family on (0,1)^d: constant mode plus normalized
// cos(k pi x) tensor modes ordered by increasing |k|^2 (ties lexicographic).
// lambdas.size() modes are retained; frequencies must stay below n per axis.
NoiseModel interior_spectral_model(const Grid& g, const Vec& lambdas, double r_exponent = 2.0,
                                   double tail_mass = 0.0);

// Boundary family. d=1: the two endpoint modes (1,1)/sqrt(2), (1,-1)/sqrt(2).
// d=2: trigonometric loop modes on the arc-length parameterization of the
// perimeter: 1/2, then cos/sin(2 pi k arc/4)/sqrt(2) pairs; requires
// 2 k_max < 2n for exact discrete orthonormality.
NoiseModel boundary_spectral_model(const Grid& g, const Vec& lambdas, double s_exponent = 2.0,
                                   double tail_mass = 0.0);

// Discrete white noise (interior, d=1 only): per-node N(0, dt/h) increments.
// Other targets/dimensions are rejected citing the admissibility rule.
NoiseModel white_noise_model(const Grid& g, double r_exponent = 2.0);

// Parses "index,value" spectrum rows (CSV) into a dense lambda vector of
// length max_modes; missing entries are zero. Negative values are rejected.
Vec read_spectrum_csv(std::istream& is, int max_modes);

// Addressing context for counter-based draws. Increments are a pure function
// of (master_seed, stream tag, path_index, step, mode) at the finest lattice
// (fine_M steps over [0, T]); coarser lattices aggregate fine blocks.
struct IncrementStream {
    uint64_t master_seed = 0;
    uint64_t path_index = 0;
    int fine_M = 1;   // addressing resolution (finest step count)
    double T = 1.0;   // time horizon
};

// Wiener increment for one fine step: spectral models return
// sum_n sqrt(lambda_n) xi_n e_n with xi_n ~ N(0, T/fine_M); white models
// return per-node N(0, dt/h) draws. step must lie in [0, fine_M).
Vec wiener_increment(const NoiseModel& model, const Grid& g, const IncrementStream& stream,
                     int step);

// Increment for step `coarse_step` of a coarse lattice with coarse_M steps:
// the sum of the fine increments in the corresponding block (bit-identical
// underlying draws; coarse_M == fine_M reduces to wiener_increment).
// Requires fine_M % coarse_M == 0.
Vec couple_to_coarse(const NoiseModel& model, const Grid& g, const IncrementStream& stream,
                     int coarse_M, int coarse_step);

struct GammaNorm {
    double value = 0.0;
    bool surrogate = false; // true for p != 2 (square-function equivalent norm)
};

// Finite-rank gamma-norm of the operator with the given columns R h_n.
// p = 2: exact weighted Hilbert-Schmidt value. p != 2: the square-function
// surrogate || (sum_n |R h_n|^2)^{1/2} ||_{L^p}, flagged as such.
GammaNorm gamma_norm(const Grid& g, const Mat& columns, double p);

// Factorizes a symmetric PSD covariance matrix Q (in an orthonormal carrier
// basis) into i with Q = i i^T, keeping only nonzero modes. Eigenvalues below
// -1e-8 reject the input as non-PSD; asymmetry beyond 1e-10 is rejected.
Mat rkhs_factorize(const Mat& Q);

// Admissibility validators for the catalog noise regimes.
struct ExampleConfig {
    int regime = 45;      // one of 45, 46, 47, 48
    int dim = 1;
    double p = 2.0;
    double q = 0.0;       // regime 46
    double s_exp = 0.0;   // regime 46
    double r_exp = 2.0;   // regime 47
    double theta_B = 0.3; // regimes 47, 48
    Vec lambdas;          // regime 45
    Vec mode_sup_norms;   // regime 45 (defaults to all-ones when empty)
};

struct AdmissibilityReport {
    bool pass = false;
    std::string violated;   // human-readable name of the failed inequality
    double partial_sum = 0; // regime 45: sum lambda_n ||e_n||_inf^2
    double tail_decay = 0;  // regime 45: fitted log-log decay exponent
};

AdmissibilityReport validate_example(const ExampleConfig& cfg);

} // namespace bnspde
