#pragma once
// The discrete Neumann map N_h(t), the boundary-forcing operator
// Lambda_h(t) = -A_h(t) N_h(t), and the trace-adjoint identity checker.
//
// Boundary data y are conormal-flux values at the boundary nodes (outward
// a grad(u) . n). The injection E maps them to an interior source supported
// on boundary-adjacent cells, so that the weighted mass balance
// <E y, 1>_w = <y, 1>_boundary holds exactly.
//
// With the family convention A_h(t) = raw assembly and eig(A_h) < shift_w:
//   N_h(t) y      = (shift_w - A_h(t))^{-1} E y
//   Lambda_h(t) y = E y - shift_w N_h(t) y   ( == -A_h(t) N_h(t) y )
// Configurations that absorb the shift into a0 (shift_w = 0, spectrum
// strictly negative) get Lambda_h = E exactly, with no elliptic solve.
//
// The trace-adjoint identity <Lambda_h y, phi>_w ~ <y, trace(phi)>_boundary
// mirrors the adjoint relation between boundary forcing and the trace map; it
// holds (up to O(h)) for generators whose spectrum already lies below zero,
// i.e. families with the shift absorbed.

#include "core/operator_family.hpp"

#include <iosfwd>

namespace bnspde {

// E: boundary flux data -> interior source (value y_j / h added to the cell
// adjacent to boundary node j; rectangle corner cells receive contributions
// from both their boundary faces). Throws std::invalid_argument on a length
// mismatch.
Vec boundary_inject(const Grid& g, const Vec& y);

// Parses "index,value" lines (one per boundary node, missing nodes are zero).
// Throws std::invalid_argument on malformed rows or out-of-range indices.
Vec read_boundary_csv(const Grid& g, std::istream& is);

class BoundaryMap {
  public:
    // alpha is the boundary-space smoothness exponent carried by the
    // configuration; it gates the admissible smoothing range and must lie in
    // (1, 2). It does not alter the discrete solves.
    BoundaryMap(const OperatorFamily& family, double alpha);

    const OperatorFamily& family() const { return family_; }
    double alpha() const { return alpha_; }

    // Solution of the shifted elliptic problem with zero interior source and
    // prescribed conormal flux y. Factorizations are reused from the family's
    // prepared cache when t is on the lattice.
    Vec neumann_solve(double t, const Vec& y) const;

    // -A_h(t) N_h(t) y, evaluated as E y - shift_w N_h(t) y (exact identity;
    // avoids applying the stencil to the solve output). No solve is needed
    // when shift_w = 0.
    Vec lambda_apply(double t, const Vec& y) const;

    // (shift_w - A_h(t))^{-theta} Lambda_h(t) y. theta must lie in
    // [1 - alpha/2, 1]; outside that the call throws std::invalid_argument
    // citing the admissible interval.
    Vec smoothed_lambda_apply(double t, double theta, const Vec& y) const;

    // |<Lambda_h(t) y, phi>_w - <y, trace(phi)>_boundary|. phi must satisfy
    // the discrete homogeneous conormal condition: at every boundary node the
    // second-order one-sided normal derivative must vanish up to the
    // curvature-scaled discretization tolerance (see bc_certificate).
    // Throws std::invalid_argument when the certificate fails.
    double trace_adjoint_residual(double t, const Vec& y, const Vec& phi) const;

    // True when phi passes the homogeneous-conormal-condition check above.
    bool bc_certificate(const Vec& phi) const;

  private:
    const OperatorFamily& family_;
    double alpha_;
};

} // namespace bnspde
