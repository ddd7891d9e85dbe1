#include "core/variational.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bnspde {

namespace {

double profile_value(const TestFunction& tf, double t) {
    switch (tf.profile) {
    case TimeProfile::Constant: return 1.0;
    case TimeProfile::Linear: return tf.a + tf.b * t;
    case TimeProfile::ExpDecay: return std::exp(-t);
    }
    return 1.0;
}

double profile_derivative(const TestFunction& tf, double t) {
    switch (tf.profile) {
    case TimeProfile::Constant: return 0.0;
    case TimeProfile::Linear: return tf.b;
    case TimeProfile::ExpDecay: return -std::exp(-t);
    }
    return 0.0;
}

Vec cosine_profile(const Grid& g, int mode) {
    if (mode < 0) throw std::invalid_argument("test function: mode must be >= 0");
    Vec psi(g.num_interior());
    const double f = mode * std::numbers::pi;
    if (g.dim == 1) {
        for (int i = 0; i < g.n; ++i) psi[i] = std::cos(f * (i + 0.5) * g.h);
    } else {
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix)
                psi[g.cell_index(ix, iy)] =
                    std::cos(f * (ix + 0.5) * g.h) * std::cos(f * (iy + 0.5) * g.h);
    }
    return psi;
}

} // namespace

Vec TestFunction::value(double t) const { return profile_value(*this, t) * psi; }

Vec TestFunction::derivative(double t) const {
    if (profile == TimeProfile::Constant) return Vec::Zero(psi.size());
    return profile_derivative(*this, t) * psi;
}

TestFunction constant_profile_test_function(const Grid& g, int mode) {
    return {"const-cos" + std::to_string(mode), cosine_profile(g, mode), TimeProfile::Constant,
            1.0, 0.0};
}

TestFunction linear_profile_test_function(const Grid& g, int mode, double a, double b) {
    return {"linear-cos" + std::to_string(mode), cosine_profile(g, mode), TimeProfile::Linear, a,
            b};
}

TestFunction exp_profile_test_function(const Grid& g, int mode) {
    return {"exp-cos" + std::to_string(mode), cosine_profile(g, mode), TimeProfile::ExpDecay, 1.0,
            0.0};
}

double variational_residual(const SpdeSystem& sys, const Trajectory& traj,
                            const TestFunction& phi, const IncrementStream& stream,
                            BoundaryPairing pairing) {
    validate_system(sys);
    const Grid& g = sys.family->grid();
    const SteppingLattice& lat = traj.lattice;
    if (traj.states.size() != static_cast<size_t>(lat.M) + 1)
        throw std::invalid_argument("variational residual: trajectory does not cover its lattice");
    if (phi.psi.size() != g.num_interior())
        throw std::invalid_argument("variational residual: test function on a different grid");

    // Membership check for the discrete adjoint domain.
    if (sys.boundary != nullptr) {
        if (!sys.boundary->bc_certificate(phi.psi))
            throw std::invalid_argument(
                "variational residual: test function violates the discrete homogeneous conormal "
                "condition");
    } else {
        BoundaryMap probe(*sys.family, 1.5);
        if (!probe.bc_certificate(phi.psi))
            throw std::invalid_argument(
                "variational residual: test function violates the discrete homogeneous conormal "
                "condition");
    }

    const double dt = lat.dt();
    const bool autonomous = !sys.family->coeffs().time_dependent();
    SpMat a_static;
    if (autonomous) a_static = sys.family->matrix(0.0);

    const double lhs = wdot(g, traj.states.back(), phi.value(lat.time(lat.M))) -
                       wdot(g, traj.states.front(), phi.value(0.0));

    double rhs = 0.0;
    for (int k = 0; k < lat.M; ++k) {
        const double tk = lat.time(k);
        const Vec& u = traj.states[static_cast<size_t>(k)];
        const Vec phik = phi.value(tk);

        if (phi.profile != TimeProfile::Constant) rhs += dt * wdot(g, u, phi.derivative(tk));

        const Vec aphi = autonomous ? Vec(a_static * phik) : Vec(sys.family->matrix(tk) * phik);
        rhs += dt * wdot(g, u, aphi);

        if (!sys.F.is_zero()) rhs += dt * wdot(g, sys.F.apply(u), phik);

        Vec tr;
        bool have_trace = false;
        if (!sys.G.is_zero()) {
            tr = trace(g, u);
            have_trace = true;
            const Vec gval = sys.G.apply(tr);
            if (pairing == BoundaryPairing::Lambda)
                rhs += dt * wdot(g, sys.boundary->lambda_apply(tk, gval), phik);
            else
                rhs += dt * boundary_dot(g, gval, trace(g, phik));
        }
        if (sys.interior_noise_active()) {
            Vec dw = couple_to_coarse(sys.interior_noise, g, stream, lat.M, k);
            rhs += wdot(g, sys.B.apply(u).cwiseProduct(dw), phik);
        }
        if (sys.boundary_noise_active()) {
            if (!have_trace) tr = trace(g, u);
            Vec dw = couple_to_coarse(sys.boundary_noise, g, stream, lat.M, k);
            const Vec cval = sys.C.apply(tr).cwiseProduct(dw);
            if (pairing == BoundaryPairing::Lambda)
                rhs += wdot(g, sys.boundary->lambda_apply(tk, cval), phik);
            else
                rhs += boundary_dot(g, cval, trace(g, phik));
        }
    }
    return std::abs(lhs - rhs);
}

} // namespace bnspde
