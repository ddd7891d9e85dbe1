#include "core/nonlinearity.hpp"

#include "core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bnspde {

double NonlinearitySpec::eval(double u) const {
    switch (kind) {
    case NonlinKind::Zero: return 0.0;
    case NonlinKind::Constant: return c0;
    case NonlinKind::Affine: return c0 + c1 * u;
    case NonlinKind::Tanh: return std::tanh(c0 * u);
    case NonlinKind::Sin: return std::sin(c0 * u);
    case NonlinKind::ClippedLinear: return std::clamp(c1 * u, -cap, cap);
    }
    return 0.0;
}

double NonlinearitySpec::lipschitz() const {
    switch (kind) {
    case NonlinKind::Zero: return 0.0;
    case NonlinKind::Constant: return 0.0;
    case NonlinKind::Affine: return std::abs(c1);
    case NonlinKind::Tanh: return std::abs(c0);
    case NonlinKind::Sin: return std::abs(c0);
    case NonlinKind::ClippedLinear: return std::abs(c1);
    }
    return 0.0;
}

double NonlinearitySpec::growth() const {
    switch (kind) {
    case NonlinKind::Zero: return 0.0;
    case NonlinKind::Constant: return std::abs(c0);
    case NonlinKind::Affine: return std::max(std::abs(c0), std::abs(c1));
    case NonlinKind::Tanh: return 1.0; // |tanh| <= 1
    case NonlinKind::Sin: return 1.0;  // |sin| <= 1
    case NonlinKind::ClippedLinear: return std::min(std::abs(c1), cap);
    }
    return 0.0;
}

std::string NonlinearitySpec::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
    case NonlinKind::Zero: os << "zero"; break;
    case NonlinKind::Constant: os << "constant:" << c0; break;
    case NonlinKind::Affine: os << "affine:" << c0 << ":" << c1; break;
    case NonlinKind::Tanh: os << "tanh:" << c0; break;
    case NonlinKind::Sin: os << "sin:" << c0; break;
    case NonlinKind::ClippedLinear: os << "clipped:" << c1 << ":" << cap; break;
    }
    return os.str();
}

Vec NonlinearitySpec::apply(const Vec& u) const {
    Vec out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = eval(u[i]);
    return out;
}

NonlinearitySpec zero_nonlinearity() { return {}; }

NonlinearitySpec constant_nonlinearity(double c) {
    NonlinearitySpec s;
    s.kind = NonlinKind::Constant;
    s.c0 = c;
    return s;
}

NonlinearitySpec affine_nonlinearity(double c0, double c1) {
    NonlinearitySpec s;
    s.kind = NonlinKind::Affine;
    s.c0 = c0;
    s.c1 = c1;
    return s;
}

NonlinearitySpec tanh_nonlinearity(double scale) {
    NonlinearitySpec s;
    s.kind = NonlinKind::Tanh;
    s.c0 = scale;
    return s;
}

NonlinearitySpec sin_nonlinearity(double scale) {
    NonlinearitySpec s;
    s.kind = NonlinKind::Sin;
    s.c0 = scale;
    return s;
}

NonlinearitySpec clipped_linear_nonlinearity(double slope, double cap) {
    if (cap <= 0.0) throw std::invalid_argument("clipped-linear nonlinearity: cap must be positive");
    NonlinearitySpec s;
    s.kind = NonlinKind::ClippedLinear;
    s.c1 = slope;
    s.cap = cap;
    return s;
}

NonlinearitySpec parse_nonlinearity(const std::string& text) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ':')) parts.push_back(token);
    if (parts.empty()) throw std::invalid_argument("nonlinearity: empty descriptor");

    auto want = [&](size_t n) {
        if (parts.size() != n + 1) {
            throw std::invalid_argument("nonlinearity '" + parts[0] + "': expected " +
                                        std::to_string(n) + " parameter(s) in '" + text + "'");
        }
    };
    auto num = [&](size_t i) {
        size_t pos = 0;
        double v = std::stod(parts[i], &pos);
        if (pos != parts[i].size()) {
            throw std::invalid_argument("nonlinearity: bad number '" + parts[i] + "' in '" + text + "'");
        }
        return v;
    };

    if (parts[0] == "zero") {
        want(0);
        return zero_nonlinearity();
    }
    if (parts[0] == "constant") {
        want(1);
        return constant_nonlinearity(num(1));
    }
    if (parts[0] == "affine") {
        want(2);
        return affine_nonlinearity(num(1), num(2));
    }
    if (parts[0] == "tanh") {
        want(1);
        return tanh_nonlinearity(num(1));
    }
    if (parts[0] == "sin") {
        want(1);
        return sin_nonlinearity(num(1));
    }
    if (parts[0] == "clipped") {
        want(2);
        return clipped_linear_nonlinearity(num(1), num(2));
    }
    throw std::invalid_argument("nonlinearity: unknown kind '" + parts[0] + "'");
}

LipschitzReport lipschitz_audit(const OperatorFamily& family, const NoiseModel& noise,
                                const NonlinearitySpec& spec, double theta, int samples,
                                uint64_t seed) {
    if (samples < 100) {
        throw std::invalid_argument("lipschitz_audit: needs at least 100 sample pairs");
    }
    if (!noise.is_null() && (noise.target != NoiseTarget::Interior || noise.kind != NoiseKind::Spectral)) {
        throw std::invalid_argument(
            "lipschitz_audit: only interior spectral noise (or a null model for drift slots) is supported");
    }
    const Grid& g = family.grid();
    const Eigen::Index N = g.interior_weights.size();

    double amplification = 1.0;
    if (!noise.is_null()) {
        double s = 0.0;
        for (Eigen::Index n = 0; n < noise.lambdas.size(); ++n) {
            double sup = noise.modes.col(n).cwiseAbs().maxCoeff();
            s += noise.lambdas[n] * sup * sup;
        }
        amplification = std::sqrt(s);
    }

    LipschitzReport report;
    report.catalog_constant = spec.lipschitz() * amplification;

    for (int pair = 0; pair < samples; ++pair) {
        Vec x(N), y(N);
        for (Eigen::Index i = 0; i < N; ++i) {
            x[i] = normal_draw(seed, kStreamAux, static_cast<uint64_t>(pair), 0, static_cast<uint64_t>(i));
            y[i] = normal_draw(seed, kStreamAux, static_cast<uint64_t>(pair), 1, static_cast<uint64_t>(i));
        }
        Vec diff = spec.apply(x) - spec.apply(y);
        double denom = std::sqrt(wdot(g, x - y, x - y));
        if (denom == 0.0) continue;

        double value = 0.0;
        if (noise.is_null()) {
            // Drift slot: plain L^2 difference quotient, optionally smoothed.
            Vec v = (theta != 0.0) ? family.fractional_power_apply(0.0, -theta, diff) : diff;
            value = std::sqrt(wdot(g, v, v));
        } else {
            Mat cols(N, noise.rank());
            for (Eigen::Index n = 0; n < noise.rank(); ++n) {
                Vec col = std::sqrt(noise.lambdas[n]) * noise.modes.col(n).cwiseProduct(diff);
                cols.col(n) = (theta != 0.0) ? family.fractional_power_apply(0.0, -theta, col) : col;
            }
            value = gamma_norm(g, cols, 2.0).value;
        }
        report.ratio = std::max(report.ratio, value / denom);
    }
    report.pass = report.ratio <= report.catalog_constant * 1.05;
    return report;
}

} // namespace bnspde
