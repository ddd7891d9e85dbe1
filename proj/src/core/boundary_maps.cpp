#include "core/boundary_maps.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bnspde {

Vec boundary_inject(const Grid& g, const Vec& y) {
    if (y.size() != g.num_boundary())
        throw std::invalid_argument("boundary_inject: datum length does not match boundary nodes");
    Vec out = Vec::Zero(g.num_interior());
    for (int j = 0; j < g.num_boundary(); ++j) out[g.boundary_adjacent_cell(j)] += y[j] / g.h;
    return out;
}

Vec read_boundary_csv(const Grid& g, std::istream& is) {
    Vec y = Vec::Zero(g.num_boundary());
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        long idx = -1;
        double val = 0.0;
        char comma = '\0';
        if (!(row >> idx >> comma >> val) || comma != ',') {
            throw std::invalid_argument("boundary data row " + std::to_string(lineno) +
                                        ": expected 'index,value'");
        }
        if (idx < 0 || idx >= g.num_boundary()) {
            throw std::invalid_argument("boundary data row " + std::to_string(lineno) +
                                        ": node index " + std::to_string(idx) + " out of range");
        }
        y[idx] = val;
    }
    return y;
}

BoundaryMap::BoundaryMap(const OperatorFamily& family, double alpha)
    : family_(family), alpha_(alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("BoundaryMap: alpha must lie in (1, 2)");
}

Vec BoundaryMap::neumann_solve(double t, const Vec& y) const {
    return family_.shifted_solve(t, boundary_inject(family_.grid(), y));
}

Vec BoundaryMap::lambda_apply(double t, const Vec& y) const {
    Vec e = boundary_inject(family_.grid(), y);
    const double w = family_.shift();
    if (w == 0.0) return e;
    return e - w * family_.shifted_solve(t, e);
}

Vec BoundaryMap::smoothed_lambda_apply(double t, double theta, const Vec& y) const {
    const double lo = 1.0 - alpha_ / 2.0;
    if (theta < lo || theta > 1.0) {
        std::ostringstream os;
        os << "smoothed_lambda_apply: theta = " << theta << " outside the admissible interval ["
           << lo << ", 1] for alpha = " << alpha_;
        throw std::invalid_argument(os.str());
    }
    return family_.fractional_power_apply(t, -theta, lambda_apply(t, y));
}

bool BoundaryMap::bc_certificate(const Vec& phi) const {
    const Grid& g = family_.grid();
    if (phi.size() != g.num_interior())
        throw std::invalid_argument("bc_certificate: grid function length mismatch");
    const double scale = 1.0 + phi.cwiseAbs().maxCoeff();
    for (int j = 0; j < g.num_boundary(); ++j) {
        const int c1 = g.boundary_adjacent_cell(j);
        const int c2 = g.boundary_second_cell(j);
        const int c3 = c2 + (c2 - c1); // third cell along the inward normal
        // Second-order one-sided estimate of the normal derivative at the
        // wall from the first three cell centers, and the local curvature
        // that bounds its discretization error.
        const double slope = std::abs(-2.0 * phi[c1] + 3.0 * phi[c2] - phi[c3]) / g.h;
        const double curv = std::abs(phi[c1] - 2.0 * phi[c2] + phi[c3]) / (g.h * g.h);
        if (slope > std::max(1e-8 * scale, 4.0 * g.h * curv)) return false;
    }
    return true;
}

double BoundaryMap::trace_adjoint_residual(double t, const Vec& y, const Vec& phi) const {
    if (!bc_certificate(phi))
        throw std::invalid_argument(
            "trace_adjoint_residual: phi violates the discrete homogeneous conormal condition");
    const Grid& g = family_.grid();
    const double lhs = wdot(g, lambda_apply(t, y), phi);
    const double rhs = boundary_dot(g, y, trace(g, phi));
    return std::abs(lhs - rhs);
}

} // namespace bnspde
