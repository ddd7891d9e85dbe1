#pragma once
// Weak-form residual of a computed trajectory against catalog test functions:
//
//   <U(T), phi(T)> - <u0, phi(0)>
//     =? sum_k dt [ <U_k, phi'(t_k)> + <U_k, A(t_k) phi(t_k)> + <F(U_k), phi(t_k)> ]
//      + sum_k dt <Lambda(t_k) G(tr U_k), phi(t_k)>
//      + sum_k <B(U_k).dW1_k, phi(t_k)> + sum_k <Lambda(t_k)(C(tr U_k).dW2_k), phi(t_k)>
//
// with left-endpoint quadrature throughout and the same driving increments
// the trajectory consumed. The discrete generator is symmetric, so A(t)
// stands in for its adjoint. Boundary terms can be paired either through
// the forcing operator (<Lambda y, phi>) or through the boundary trace
// (<y, trace phi>); the two variants agree up to the trace-adjoint residual.
//
// The residual is not expected to vanish at fixed resolution: it converges
// under lattice refinement, and the tests assert the observed order.

#include "core/mild_solver.hpp"

#include <string>

namespace bnspde {

enum class TimeProfile { Constant, Linear, ExpDecay };

// Separable test function phi(t) = profile(t) * psi with an analytic time
// derivative; psi must satisfy the discrete homogeneous conormal condition
// (checked against the curvature-scaled certificate when the residual is
// evaluated).
struct TestFunction {
    std::string id;
    Vec psi;
    TimeProfile profile = TimeProfile::Constant;
    double a = 1.0; // Linear: phi = (a + b t) psi
    double b = 0.0;

    Vec value(double t) const;
    Vec derivative(double t) const;
};

// Catalog factories. `mode` selects the spatial profile cos(mode pi x)
// (tensorized as cos(mode pi x) cos(mode pi y) on 2-d grids); mode 0 is the
// constant profile. All catalog profiles pass the conormal certificate.
TestFunction constant_profile_test_function(const Grid& g, int mode);
TestFunction linear_profile_test_function(const Grid& g, int mode, double a, double b);
TestFunction exp_profile_test_function(const Grid& g, int mode);

enum class BoundaryPairing { Lambda, Trace };

// |LHS - RHS| of the weak form above for one trajectory and one test
// function. The stream must address the same increments the trajectory was
// computed with (counter-based draws make this exact). Throws
// std::invalid_argument on a lattice/grid mismatch or when psi fails the
// conormal certificate.
double variational_residual(const SpdeSystem& sys, const Trajectory& traj,
                            const TestFunction& phi, const IncrementStream& stream,
                            BoundaryPairing pairing = BoundaryPairing::Lambda);

} // namespace bnspde
