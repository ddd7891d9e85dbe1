#pragma once
// Time-dependent scalar diffusion fields a(t,x) and zeroth-order terms a0(t,x)
// from a fixed catalog, with claimed ellipticity and time-Hoelder metadata,
// plus the statistical validator that audits those claims.

#include <string>

namespace bnspde {

enum class CoeffKind {
    Constant,    // a = c
    SinSpace,    // a = 1 + 0.5 sin(2 pi x) (times sin(2 pi y) in 2D); min 0.5
    AffineSpace, // a = c0 + c1 * x (validator / rejection exercises)
    TimeHoelder, // a = 1 + 0.25 |sin(2 pi t)|^mu (space-constant, genuinely C^mu)
    TimeStep     // a = 1 + 0.5 [t >= 1/2] (discontinuous in time; must fail audit)
};

struct CoefficientField {
    CoeffKind kind = CoeffKind::Constant;
    int dim = 1;              // spatial dimension the field is evaluated in
    double c0 = 1.0;          // Constant/AffineSpace base value
    double c1 = 0.0;          // AffineSpace slope
    double a0_const = 0.0;    // zeroth-order term (constant in t and x)
    double mu = 1.0;          // claimed Hoelder exponent of t -> a(t,.), in (1/2, 1]
    double kappa_claim = 1.0; // claimed ellipticity lower bound

    double a_value(double t, double x, double y) const;
    double a0_value(double t, double x, double y) const;

    // Exact infimum of a over t in [0,1] and the domain, where known in
    // closed form (used as the oracle for the fitted kappa).
    double analytic_kappa() const;

    bool time_dependent() const {
        return kind == CoeffKind::TimeHoelder || kind == CoeffKind::TimeStep;
    }
};

CoefficientField constant_coeffs(double a, double a0 = 0.0);
CoefficientField sin_space_coeffs(double a0 = 0.0);
CoefficientField affine_space_coeffs(double c0, double c1, double a0 = 0.0);
CoefficientField time_hoelder_coeffs(double mu, double a0 = 0.0);
CoefficientField time_step_coeffs(double a0 = 0.0);

struct AssumptionReport {
    double kappa_fitted = 0.0;    // min of a over the sample cloud
    double hoelder_exponent = 0.0; // fitted from dyadic sup increments in t
    double hoelder_constant = 0.0;
    bool kappa_pass = false;   // fitted kappa >= claim - 1e-9 and > 0
    bool hoelder_pass = false; // fitted exponent >= mu - 0.1
    bool pass = false;
    std::string detail;
};

// Statistical audit of the ellipticity bound and the temporal Hoelder claim.
// time_samples / space_samples must each be >= 8. For time-constant fields the
// Hoelder clause passes trivially and is flagged in `detail`.
AssumptionReport validate_assumptions(const CoefficientField& cf, int time_samples,
                                      int space_samples, int dim);

} // namespace bnspde
