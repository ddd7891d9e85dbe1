#pragma once
// Drift-implicit Euler stepping for the semilinear parabolic equation with
// interior multiplicative noise and Neumann boundary noise.
//
// One transition from t_k to t_{k+1} = t_k + dt computes
//
//   U_{k+1} = (I - dt A_h(t_{k+1}))^{-1} [ U_k + dt F(U_k)
//                + dt Lambda_h(t_k) G(tr U_k)
//                + B(U_k) . dW1_k + Lambda_h(t_k) (C(tr U_k) . dW2_k) ]
//
// i.e. the linear part is implicit at the right endpoint while drift and
// noise coefficients are evaluated at the left endpoint, and the boundary
// lifting Lambda_h is applied to the assembled boundary data before the
// resolvent. Slots whose nonlinearity is zero (or whose noise model is null)
// are skipped without touching the right-hand side, so a fully deterministic
// configuration performs exactly the same arithmetic as plain semigroup
// propagation.

#include "core/boundary_maps.hpp"
#include "core/evolution.hpp"
#include "core/noise.hpp"
#include "core/nonlinearity.hpp"
#include "core/operator_family.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace bnspde {

struct SpdeSystem {
    const OperatorFamily* family = nullptr;
    const BoundaryMap* boundary = nullptr; // required iff G or C is active
    NonlinearitySpec F;                    // interior drift
    NonlinearitySpec G;                    // boundary drift (on the trace)
    NonlinearitySpec B;                    // interior noise coefficient
    NonlinearitySpec C;                    // boundary noise coefficient
    NoiseModel interior_noise;             // consumed by B
    NoiseModel boundary_noise;             // consumed by C
    Vec u0;

    bool interior_noise_active() const { return !B.is_zero() && !interior_noise.is_null(); }
    bool boundary_noise_active() const { return !C.is_zero() && !boundary_noise.is_null(); }
};

// Structural checks: family present, u0 sized to the grid, noise targets
// matching their slots, boundary map present when a boundary slot is active.
// Throws std::invalid_argument on the first violation.
void validate_system(const SpdeSystem& sys);

struct Trajectory {
    SteppingLattice lattice;
    std::vector<Vec> states; // states[k] at time t_k; states[0] == u0
    uint64_t fingerprint = 0;
};

// One transition t_k -> t_{k+1}. Increments are drawn through the stream's
// fine-lattice addressing (couple_to_coarse), so the same stream produces
// coupled paths across nested lattices.
Vec step(const SpdeSystem& sys, const SteppingLattice& lattice, const IncrementStream& stream,
         int k, const Vec& state);

// Full path storing every state (desk-scale runs). Aborts with
// std::runtime_error when a state stops being finite, reporting the step and
// the last finite norms.
Trajectory run_path(const SpdeSystem& sys, const SteppingLattice& lattice,
                    const IncrementStream& stream, uint64_t fingerprint = 0);

using StateCallback = std::function<void(int step_index, double t, const Vec& state)>;

// Streams states without storing the whole path: the callback fires at
// k = 0, stride, 2*stride, ..., and always at k = M. A closed-form spectral
// integrator handles qualifying systems (see fast_path_eligible) with the
// same transition law; pass allow_fast_path = false to force generic
// stepping (used by the equivalence tests).
void run_path_streaming(const SpdeSystem& sys, const SteppingLattice& lattice,
                        const IncrementStream& stream, int stride, const StateCallback& cb,
                        bool allow_fast_path = true);

// True when the spectral fast path can integrate the system: 2-d grid,
// constant coefficients with absorbed shift (shift_w = 0), F and B inactive,
// G zero or constant, C constant with spectral boundary noise, u0 constant.
bool fast_path_eligible(const SpdeSystem& sys);

// Steady-state residual || -A_h U - c ||_{L^2} of the autonomous fixed point
// reached by F = constant(c) with zero noise (the implicit scheme's fixed
// point solves -A_h U* = c when the spectrum lies strictly below zero).
double steady_state_residual(const SpdeSystem& sys, const Vec& state);

} // namespace bnspde
