#pragma once
// Fixed catalog of pointwise nonlinearities with known Lipschitz constants
// and linear-growth bounds, plus the empirical Lipschitz audit.
//
// The four slots of the equation use them as:
//   F: interior drift, applied nodewise to the state,
//   G: boundary drift, applied nodewise to the boundary trace of the state,
//   B: interior noise coefficient, multiplying the interior increment nodewise,
//   C: boundary noise coefficient, multiplying the boundary increment nodewise.

#include "core/noise.hpp"
#include "core/operator_family.hpp"

#include <cstdint>
#include <string>

namespace bnspde {

enum class NonlinKind { Zero, Constant, Affine, Tanh, Sin, ClippedLinear };

struct NonlinearitySpec {
    NonlinKind kind = NonlinKind::Zero;
    double c0 = 0.0;  // constant term / scale
    double c1 = 0.0;  // slope (affine, clipped-linear)
    double cap = 0.0; // clipped-linear saturation

    double eval(double u) const;
    // Exact Lipschitz constant of the scalar map (catalog-derived).
    double lipschitz() const;
    // Linear growth bound: |f(u)| <= growth() * (1 + |u|).
    double growth() const;
    bool is_zero() const { return kind == NonlinKind::Zero; }
    std::string name() const;

    // Nodewise application to a grid or boundary function.
    Vec apply(const Vec& u) const;
};

NonlinearitySpec zero_nonlinearity();
NonlinearitySpec constant_nonlinearity(double c);
NonlinearitySpec affine_nonlinearity(double c0, double c1);
NonlinearitySpec tanh_nonlinearity(double scale);   // u -> tanh(scale u)
NonlinearitySpec sin_nonlinearity(double scale);    // u -> sin(scale u)
NonlinearitySpec clipped_linear_nonlinearity(double slope, double cap);

// Parses a catalog descriptor: "zero", "constant:c", "affine:c0:c1",
// "tanh:s", "sin:s", "clipped:c:cap". Throws on unknown names.
NonlinearitySpec parse_nonlinearity(const std::string& text);

struct LipschitzReport {
    double ratio = 0.0;            // worst sampled smoothed-difference ratio
    double catalog_constant = 0.0; // Lipschitz constant times noise amplification
    bool pass = false;             // ratio <= catalog_constant * 1.05
};

// Empirical Lipschitz ratio of the smoothed noise coefficient
//   sup_x,y || (shift - A_h)^{-theta} [ (spec(x) - spec(y)) . sqrt(lambda_n) e_n ] ||_gamma
//          / || x - y ||_{L^2}
// over `samples` random state pairs (>= 100 required). The catalog bound is
// the scalar Lipschitz constant amplified by sqrt(sum lambda_n sup|e_n|^2).
// Pass a null-noise model to audit a drift slot (F): the ratio is then
// || spec(x) - spec(y) ||_{L^2} / || x - y ||_{L^2} without smoothing.
LipschitzReport lipschitz_audit(const OperatorFamily& family, const NoiseModel& noise,
                                const NonlinearitySpec& spec, double theta, int samples,
                                uint64_t seed);

} // namespace bnspde
