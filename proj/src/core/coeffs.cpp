#include "core/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bnspde {

namespace {
constexpr double kPi = std::numbers::pi;
}

double CoefficientField::a_value(double t, double x, double y) const {
    switch (kind) {
        case CoeffKind::Constant: return c0;
        case CoeffKind::SinSpace: {
            const double sx = std::sin(2.0 * kPi * x);
            if (dim == 1) return 1.0 + 0.5 * sx;
            return 1.0 + 0.5 * sx * std::sin(2.0 * kPi * y);
        }
        case CoeffKind::AffineSpace: return c0 + c1 * x;
        case CoeffKind::TimeHoelder:
            return 1.0 + 0.25 * std::pow(std::fabs(std::sin(2.0 * kPi * t)), mu);
        case CoeffKind::TimeStep: return t >= 0.5 ? 1.5 : 1.0;
    }
    return c0;
}

double CoefficientField::a0_value(double, double, double) const { return a0_const; }

double CoefficientField::analytic_kappa() const {
    switch (kind) {
        case CoeffKind::Constant: return c0;
        case CoeffKind::SinSpace: return 0.5;
        case CoeffKind::AffineSpace: return std::min(c0, c0 + c1);
        case CoeffKind::TimeHoelder: return 1.0;
        case CoeffKind::TimeStep: return 1.0;
    }
    return c0;
}

CoefficientField constant_coeffs(double a, double a0) {
    CoefficientField c;
    c.kind = CoeffKind::Constant;
    c.c0 = a;
    c.a0_const = a0;
    c.kappa_claim = a;
    return c;
}

CoefficientField sin_space_coeffs(double a0) {
    CoefficientField c;
    c.kind = CoeffKind::SinSpace;
    c.a0_const = a0;
    c.kappa_claim = 0.5;
    return c;
}

CoefficientField affine_space_coeffs(double c0, double c1, double a0) {
    CoefficientField c;
    c.kind = CoeffKind::AffineSpace;
    c.c0 = c0;
    c.c1 = c1;
    c.a0_const = a0;
    c.kappa_claim = std::min(c0, c0 + c1);
    return c;
}

CoefficientField time_hoelder_coeffs(double mu, double a0) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("time_hoelder_coeffs: mu in (0,1]");
    CoefficientField c;
    c.kind = CoeffKind::TimeHoelder;
    c.mu = mu;
    c.a0_const = a0;
    c.kappa_claim = 1.0;
    return c;
}

CoefficientField time_step_coeffs(double a0) {
    CoefficientField c;
    c.kind = CoeffKind::TimeStep;
    c.a0_const = a0;
    c.kappa_claim = 1.0;
    return c;
}

AssumptionReport validate_assumptions(const CoefficientField& cf, int time_samples,
                                      int space_samples, int dim) {
    if (time_samples < 8 || space_samples < 8)
        throw std::invalid_argument("validate_assumptions: need >= 8 samples per axis");
    AssumptionReport rep;

    // Space-time sample cloud for the ellipticity infimum.
    std::vector<double> xs(space_samples);
    for (int i = 0; i < space_samples; ++i) xs[i] = (i + 0.5) / space_samples;
    double amin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < time_samples; ++k) {
        const double t = double(k) / (time_samples - 1);
        for (double x : xs) {
            if (dim == 1) {
                amin = std::min(amin, cf.a_value(t, x, 0.0));
            } else {
                for (double y : xs) amin = std::min(amin, cf.a_value(t, x, y));
            }
        }
    }
    rep.kappa_fitted = amin;
    rep.kappa_pass = amin > 0.0 && amin >= cf.kappa_claim - 1e-9;

    if (!cf.time_dependent()) {
        rep.hoelder_exponent = 1.0;
        rep.hoelder_constant = 0.0;
        rep.hoelder_pass = true;
        rep.detail = "time-constant field: temporal regularity clause passes trivially";
    } else {
        // Dyadic sup-increment fit of sup_x |a(t+l,x) - a(t,x)| against lag l.
        const int levels = 7;
        std::vector<double> lag(levels), sup(levels);
        for (int j = 0; j < levels; ++j) {
            const double l = std::pow(2.0, -(j + 3)); // lags 1/8 .. 1/512
            double s = 0.0;
            const int nt = 512;
            for (int k = 0; k < nt; ++k) {
                const double t = (1.0 - l) * double(k) / (nt - 1);
                for (double x : xs)
                    s = std::max(s, std::fabs(cf.a_value(t + l, x, 0.0) - cf.a_value(t, x, 0.0)));
            }
            lag[j] = l;
            sup[j] = std::max(s, 1e-300);
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int j = 0; j < levels; ++j) {
            const double lx = std::log(lag[j]), ly = std::log(sup[j]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double slope = (levels * sxy - sx * sy) / (levels * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / levels;
        rep.hoelder_exponent = slope;
        rep.hoelder_constant = std::exp(intercept);
        rep.hoelder_pass = slope >= cf.mu - 0.1;
        rep.detail = rep.hoelder_pass ? "temporal increments consistent with the claimed exponent"
                                      : "temporal increments too rough for the claimed exponent";
    }
    rep.pass = rep.kappa_pass && rep.hoelder_pass;
    return rep;
}

} // namespace bnspde
