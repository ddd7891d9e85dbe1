#include "core/noise.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bnspde {

namespace {

constexpr double kPi = std::numbers::pi;

void check_orthonormal(const Grid& g, const NoiseModel& m) {
    const bool boundary = m.target == NoiseTarget::Boundary;
    const int rows = boundary ? g.num_boundary() : g.num_interior();
    if (m.modes.rows() != rows)
        throw std::logic_error("noise model: mode length does not match the grid");
    const Vec& w = boundary ? g.boundary_weights : g.interior_weights;
    Mat gram = m.modes.transpose() * w.asDiagonal() * m.modes;
    gram -= Mat::Identity(m.rank(), m.rank());
    if (gram.cwiseAbs().maxCoeff() > 1e-8)
        throw std::logic_error("noise model: modes are not weighted-orthonormal");
}

void check_lambdas(const Vec& lambdas) {
    for (int i = 0; i < lambdas.size(); ++i)
        if (!(lambdas[i] >= 0.0))
            throw std::invalid_argument("noise model: lambda_" + std::to_string(i) +
                                        " must be >= 0");
}

} // namespace

bool NoiseModel::is_null() const {
    if (kind == NoiseKind::White) return false;
    return rank() == 0 || lambdas.cwiseAbs().maxCoeff() == 0.0;
}

NoiseModel null_noise(NoiseTarget target) {
    NoiseModel m;
    m.target = target;
    m.kind = NoiseKind::Spectral;
    m.modes = Mat();
    m.lambdas = Vec();
    return m;
}

NoiseModel interior_spectral_model(const Grid& g, const Vec& lambdas, double r_exponent,
                                   double tail_mass) {
    check_lambdas(lambdas);
    const int rank = static_cast<int>(lambdas.size());
    NoiseModel m;
    m.target = NoiseTarget::Interior;
    m.kind = NoiseKind::Spectral;
    m.lambdas = lambdas;
    m.carrier_exponent = r_exponent;
    m.tail_mass = tail_mass;
    m.modes = Mat(g.num_interior(), rank);
    if (g.dim == 1) {
        if (rank > g.n)
            throw std::invalid_argument("interior noise: more modes than grid frequencies");
        for (int k = 0; k < rank; ++k) {
            const double c = k == 0 ? 1.0 : std::numbers::sqrt2;
            for (int i = 0; i < g.n; ++i)
                m.modes(i, k) = c * std::cos(k * kPi * (i + 0.5) * g.h);
        }
    } else {
        // Tensor modes ordered by |k|^2, ties lexicographic in (kx, ky).
        std::vector<std::pair<int, int>> freqs;
        const int kcap = static_cast<int>(std::ceil(std::sqrt(double(rank)))) + 2;
        for (int kx = 0; kx < kcap; ++kx)
            for (int ky = 0; ky < kcap; ++ky) freqs.emplace_back(kx, ky);
        std::sort(freqs.begin(), freqs.end(), [](auto a, auto b) {
            const int na = a.first * a.first + a.second * a.second;
            const int nb = b.first * b.first + b.second * b.second;
            return na != nb ? na < nb : a < b;
        });
        if (rank > static_cast<int>(freqs.size()))
            throw std::invalid_argument("interior noise: mode budget exceeded");
        for (int k = 0; k < rank; ++k) {
            const auto [kx, ky] = freqs[k];
            if (kx >= g.n || ky >= g.n)
                throw std::invalid_argument("interior noise: more modes than grid frequencies");
            const double c = (kx == 0 ? 1.0 : std::numbers::sqrt2) *
                             (ky == 0 ? 1.0 : std::numbers::sqrt2);
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix)
                    m.modes(g.cell_index(ix, iy), k) = c * std::cos(kx * kPi * (ix + 0.5) * g.h) *
                                                       std::cos(ky * kPi * (iy + 0.5) * g.h);
        }
    }
    check_orthonormal(g, m);
    return m;
}

NoiseModel boundary_spectral_model(const Grid& g, const Vec& lambdas, double s_exponent,
                                   double tail_mass) {
    check_lambdas(lambdas);
    const int rank = static_cast<int>(lambdas.size());
    NoiseModel m;
    m.target = NoiseTarget::Boundary;
    m.kind = NoiseKind::Spectral;
    m.lambdas = lambdas;
    m.carrier_exponent = s_exponent;
    m.tail_mass = tail_mass;
    m.modes = Mat(g.num_boundary(), rank);
    if (g.dim == 1) {
        if (rank > 2) throw std::invalid_argument("boundary noise in 1d has exactly two modes");
        const double c = 1.0 / std::numbers::sqrt2;
        for (int k = 0; k < rank; ++k) {
            m.modes(0, k) = c;
            m.modes(1, k) = k == 0 ? c : -c;
        }
    } else {
        // Loop modes in the arc-length angle theta = arc / 4 in (0, 1).
        for (int k = 0; k < rank; ++k) {
            const int pair = (k + 1) / 2; // 0, 1, 1, 2, 2, ...
            if (pair >= 2 * g.n)
                throw std::invalid_argument(
                    "boundary noise: loop frequency exceeds the exact-orthogonality budget");
            for (int j = 0; j < g.num_boundary(); ++j) {
                const double theta = g.boundary_arc(j) / 4.0;
                if (k == 0)
                    m.modes(j, k) = 0.5;
                else if (k % 2 == 1)
                    m.modes(j, k) = std::cos(2.0 * kPi * pair * theta) / std::numbers::sqrt2;
                else
                    m.modes(j, k) = std::sin(2.0 * kPi * pair * theta) / std::numbers::sqrt2;
            }
        }
    }
    check_orthonormal(g, m);
    return m;
}

NoiseModel white_noise_model(const Grid& g, double r_exponent) {
    if (g.dim != 1)
        throw std::invalid_argument(
            "white noise is limited to interior noise in dimension one with p > 2 [Example 4.8]");
    NoiseModel m;
    m.target = NoiseTarget::Interior;
    m.kind = NoiseKind::White;
    m.carrier_exponent = r_exponent;
    return m;
}

Vec read_spectrum_csv(std::istream& is, int max_modes) {
    Vec lambdas = Vec::Zero(max_modes);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        long idx = -1;
        double val = 0.0;
        char comma = '\0';
        if (!(row >> idx >> comma >> val) || comma != ',')
            throw std::invalid_argument("spectrum row " + std::to_string(lineno) +
                                        ": expected 'index,value'");
        if (idx < 0 || idx >= max_modes)
            throw std::invalid_argument("spectrum row " + std::to_string(lineno) +
                                        ": mode index out of range");
        if (!(val >= 0.0))
            throw std::invalid_argument("spectrum row " + std::to_string(lineno) +
                                        ": lambda must be >= 0");
        lambdas[idx] = val;
    }
    return lambdas;
}

Vec wiener_increment(const NoiseModel& model, const Grid& g, const IncrementStream& stream,
                     int step) {
    if (step < 0 || step >= stream.fine_M)
        throw std::invalid_argument("wiener_increment: step outside the fine lattice");
    const double dt = stream.T / stream.fine_M;
    const uint32_t tag =
        model.target == NoiseTarget::Interior ? kStreamInterior : kStreamBoundary;
    if (model.kind == NoiseKind::White) {
        const double sd = std::sqrt(dt / g.h);
        Vec out(g.num_interior());
        for (int i = 0; i < out.size(); ++i)
            out[i] = sd * normal_draw(stream.master_seed, tag, stream.path_index, step, i);
        return out;
    }
    const int rows = model.target == NoiseTarget::Interior ? g.num_interior() : g.num_boundary();
    if (model.rank() == 0) return Vec::Zero(rows);
    Vec coeff(model.rank());
    for (int n = 0; n < model.rank(); ++n) {
        coeff[n] = std::sqrt(model.lambdas[n] * dt) *
                   normal_draw(stream.master_seed, tag, stream.path_index, step, n);
    }
    return model.modes * coeff;
}

Vec couple_to_coarse(const NoiseModel& model, const Grid& g, const IncrementStream& stream,
                     int coarse_M, int coarse_step) {
    if (coarse_M <= 0 || stream.fine_M % coarse_M != 0)
        throw std::invalid_argument("couple_to_coarse: fine step count not divisible by coarse");
    if (coarse_step < 0 || coarse_step >= coarse_M)
        throw std::invalid_argument("couple_to_coarse: step outside the coarse lattice");
    const int block = stream.fine_M / coarse_M;
    Vec sum = wiener_increment(model, g, stream, coarse_step * block);
    for (int j = 1; j < block; ++j)
        sum += wiener_increment(model, g, stream, coarse_step * block + j);
    return sum;
}

GammaNorm gamma_norm(const Grid& g, const Mat& columns, double p) {
    if (columns.size() > 0 && columns.rows() != g.num_interior())
        throw std::invalid_argument("gamma_norm: column length does not match the grid");
    GammaNorm out;
    out.surrogate = p != 2.0;
    if (columns.size() == 0) return out;
    Vec sq = columns.rowwise().norm();
    out.value = lp_norm(g, sq, p);
    return out;
}

Mat rkhs_factorize(const Mat& Q) {
    if (Q.rows() != Q.cols()) throw std::invalid_argument("rkhs_factorize: matrix not square");
    if (Q.size() == 0) return Mat();
    const double scale = Q.cwiseAbs().maxCoeff();
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
        throw std::invalid_argument("rkhs_factorize: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(Q);
    if (es.info() != Eigen::Success) throw std::runtime_error("rkhs_factorize: eigensolve failed");
    const Vec& ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-8)
        throw std::domain_error("rkhs_factorize: negative eigenvalue, covariance not PSD");
    std::vector<int> keep;
    for (int i = 0; i < ev.size(); ++i)
        if (ev[i] > 1e-12 * std::max(1.0, scale)) keep.push_back(i);
    Mat factor(Q.rows(), keep.size());
    for (size_t k = 0; k < keep.size(); ++k)
        factor.col(k) = es.eigenvectors().col(keep[k]) * std::sqrt(ev[keep[k]]);
    return factor;
}

AdmissibilityReport validate_example(const ExampleConfig& cfg) {
    AdmissibilityReport rep;
    switch (cfg.regime) {
        case 45: {
            Vec sup = cfg.mode_sup_norms;
            if (sup.size() == 0) sup = Vec::Ones(cfg.lambdas.size());
            if (sup.size() != cfg.lambdas.size())
                throw std::invalid_argument("regime 45: sup-norm list length mismatch");
            std::vector<double> logs_n, logs_a;
            for (int i = 0; i < cfg.lambdas.size(); ++i) {
                if (cfg.lambdas[i] < 0.0) {
                    rep.violated = "lambda_n >= 0";
                    return rep;
                }
                const double a = cfg.lambdas[i] * sup[i] * sup[i];
                rep.partial_sum += a;
                if (a > 0.0) {
                    logs_n.push_back(std::log(double(i + 1)));
                    logs_a.push_back(std::log(a));
                }
            }
            if (logs_n.size() < 4) {
                rep.pass = true; // finite rank is trivially summable
                rep.tail_decay = -std::numeric_limits<double>::infinity();
                return rep;
            }
            // Least-squares log-log fit of a_n = lambda_n sup|e_n|^2 vs rank.
            const size_t m = logs_n.size();
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < m; ++i) {
                sx += logs_n[i];
                sy += logs_a[i];
                sxx += logs_n[i] * logs_n[i];
                sxy += logs_n[i] * logs_a[i];
            }
            rep.tail_decay = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            if (rep.tail_decay <= -1.05) {
                rep.pass = true;
            } else {
                rep.violated = "sum lambda_n sup|e_n|^2 < infinity (fitted tail decay above -1)";
            }
            return rep;
        }
        case 46: {
            const double inv_q = std::isinf(cfg.q) ? 0.0 : 1.0 / cfg.q;
            if (!(cfg.q > cfg.p)) {
                rep.violated = "q in (p, infinity]";
            } else if (!(cfg.s_exp >= cfg.p) || std::isinf(cfg.s_exp)) {
                rep.violated = "s in [p, infinity)";
            } else if (std::abs(1.0 / cfg.p - inv_q - 1.0 / cfg.s_exp) > 1e-12) {
                rep.violated = "1/p = 1/q + 1/s";
            } else {
                rep.pass = true;
            }
            return rep;
        }
        case 47: {
            const double lo = cfg.dim / (2.0 * cfg.r_exp);
            if (cfg.dim != 1 && cfg.dim != 2) {
                rep.violated = "d in {1, 2}";
            } else if (!(cfg.r_exp > 0.0)) {
                rep.violated = "r > 0";
            } else if (!(cfg.theta_B > lo && cfg.theta_B < 0.5)) {
                rep.violated = "theta_B in (d/(2r), 1/2)";
            } else {
                rep.pass = true;
            }
            return rep;
        }
        case 48: {
            const double lo = 1.0 / (2.0 * cfg.p) + 0.25;
            if (cfg.dim != 1 || !(cfg.p > 2.0)) {
                rep.violated = "requires d = 1 and p > 2";
            } else if (!(cfg.theta_B > lo && cfg.theta_B < 0.5)) {
                rep.violated = "theta_B in (1/(2p) + 1/4, 1/2)";
            } else {
                rep.pass = true;
            }
            return rep;
        }
        default:
            throw std::invalid_argument("validate_example: unknown noise regime " +
                                        std::to_string(cfg.regime));
    }
}

} // namespace bnspde
