#pragma once
// The assembled time-dependent divergence-form operator A_h(t) with conormal
// (zero-flux) boundary conditions, its resolvents, spectral decomposition,
// fractional powers and fractional-space norms.
//
// Conventions:
//   * A_h(t) is the raw finite-volume assembly of div(a grad .) + a0.
//   * shift_w is the spectral shift metadata: the family guarantees
//     eig(A_h(t)) < shift_w. Fractional calculus uses (shift_w - A_h)^theta.
//   * Configurations may absorb the shift into a0 (a0 -= w, shift_w = 0);
//     both styles are supported everywhere downstream.

#include "core/coeffs.hpp"
#include "core/grid.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cstdint>
#include <memory>
#include <ostream>
#include <unordered_map>
#include <vector>

namespace bnspde {

using SpMat = Eigen::SparseMatrix<double>;
using Mat = Eigen::MatrixXd;

// Finite-volume assembly at time t. Fluxes use face-midpoint coefficients;
// boundary faces carry no flux (conormal condition built into the stencil).
// Throws std::domain_error naming (t, x[, y]) if a is non-positive anywhere.
SpMat assemble(const CoefficientField& coeffs, const Grid& grid, double t);

struct SpectralData {
    Eigen::VectorXd eigenvalues; // ascending
    Mat eigenvectors;            // Euclid-orthonormal columns (uniform weights
                                 // make them weighted-orthonormal up to h^{d/2})
};

class OperatorFamily {
  public:
    OperatorFamily(Grid grid, CoefficientField coeffs, double shift_w);

    const Grid& grid() const { return grid_; }
    const CoefficientField& coeffs() const { return coeffs_; }
    double shift() const { return shift_w_; }

    // Single-writer preparation pass: assemble + factor (shift_w - A) and
    // (I - dt A) at the given lattice times. After this the family is
    // immutable and safe for concurrent readers.
    void prepare(const std::vector<double>& times, double dt);

    // Assembled matrix at t (cached if t was prepared, assembled on demand
    // otherwise without mutating the cache).
    SpMat matrix(double t) const;

    // Solves (lambda - A_h(t)) x = rhs; throws std::domain_error when the
    // factorization is near-singular (pivot magnitude below 1e-13).
    Vec resolvent_apply(double t, double lambda, const Vec& rhs) const;

    // One backward-Euler step solve: (I - dt A_h(t))^{-1} rhs, using the
    // prepared factorization when (t, dt) is on the prepared lattice.
    Vec step_solve(double t, double dt, const Vec& rhs) const;

    // Neumann-problem solve: (shift_w - A_h(t)) x = rhs with the prepared
    // factorization when available.
    Vec shifted_solve(double t, const Vec& rhs) const;

    // Spectral decomposition (dense symmetric eigensolve; cached when t is on
    // the prepared lattice). Desk-scale guard: 2D requires n_per_axis <= 64.
    const SpectralData& spectral(double t) const;

    // (shift_w - A_h(t))^theta f via the eigenbasis, theta in [-1, 1].
    Vec fractional_power_apply(double t, double theta, const Vec& f) const;

    // || (shift_w - A_h(t))^eta f ||_{L^p}, eta in [0, 1].
    double fractional_norm(double t, double eta, const Vec& f, double p) const;

    // Largest eigenvalue of A_h(t) (from the spectral data).
    double max_eigenvalue(double t) const;

    // Coordinate-triplet export (row, col, value), one entry per line.
    void export_triplets(double t, std::ostream& os) const;

  private:
    struct Entry {
        SpMat A;
        std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> step_factor;    // I - dt A
        std::shared_ptr<Eigen::SimplicialLDLT<SpMat>> shifted_factor; // shift - A
        std::shared_ptr<SpectralData> spectral;
    };

    static uint64_t time_key(double t);
    const Entry* find(double t) const;
    SpectralData compute_spectral(double t) const;

    Grid grid_;
    CoefficientField coeffs_;
    double shift_w_;
    double prepared_dt_ = -1.0;
    std::unordered_map<uint64_t, Entry> cache_;
    mutable std::unordered_map<uint64_t, std::shared_ptr<SpectralData>> spectral_cache_;
    bool prepared_ = false;
};

// Solve (lambda - A) x = rhs for a bare matrix (shared kernel for ad-hoc
// resolvent applications). Throws std::domain_error on near-singular pivots.
Vec sparse_shifted_solve(const SpMat& A, double lambda, const Vec& rhs);

} // namespace bnspde
