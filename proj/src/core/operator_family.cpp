#include "core/operator_family.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace bnspde {

namespace {

void check_elliptic(double a, double t, double x, double y, int dim) {
    if (a > 0.0) return;
    std::ostringstream os;
    os << "assemble: non-elliptic diffusion a = " << a << " at t = " << t << ", x = " << x;
    if (dim == 2) os << ", y = " << y;
    throw std::domain_error(os.str());
}

std::mutex g_spectral_mutex;

} // namespace

SpMat assemble(const CoefficientField& coeffs, const Grid& grid, double t) {
    const int n = grid.n;
    const double h2 = grid.h * grid.h;
    std::vector<Eigen::Triplet<double>> trip;
    if (grid.dim == 1) {
        trip.reserve(3 * n);
        for (int i = 0; i < n; ++i) {
            const double xc = (i + 0.5) * grid.h;
            double diag = coeffs.a0_value(t, xc, 0.0);
            if (i > 0) {
                const double af = coeffs.a_value(t, i * grid.h, 0.0);
                check_elliptic(af, t, i * grid.h, 0.0, 1);
                trip.emplace_back(i, i - 1, af / h2);
                diag -= af / h2;
            }
            if (i < n - 1) {
                const double af = coeffs.a_value(t, (i + 1) * grid.h, 0.0);
                check_elliptic(af, t, (i + 1) * grid.h, 0.0, 1);
                trip.emplace_back(i, i + 1, af / h2);
                diag -= af / h2;
            }
            trip.emplace_back(i, i, diag);
        }
    } else {
        trip.reserve(5 * n * n);
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                const int idx = grid.cell_index(ix, iy);
                const double xc = (ix + 0.5) * grid.h, yc = (iy + 0.5) * grid.h;
                double diag = coeffs.a0_value(t, xc, yc);
                if (ix > 0) {
                    const double af = coeffs.a_value(t, ix * grid.h, yc);
                    check_elliptic(af, t, ix * grid.h, yc, 2);
                    trip.emplace_back(idx, grid.cell_index(ix - 1, iy), af / h2);
                    diag -= af / h2;
                }
                if (ix < n - 1) {
                    const double af = coeffs.a_value(t, (ix + 1) * grid.h, yc);
                    check_elliptic(af, t, (ix + 1) * grid.h, yc, 2);
                    trip.emplace_back(idx, grid.cell_index(ix + 1, iy), af / h2);
                    diag -= af / h2;
                }
                if (iy > 0) {
                    const double af = coeffs.a_value(t, xc, iy * grid.h);
                    check_elliptic(af, t, xc, iy * grid.h, 2);
                    trip.emplace_back(idx, grid.cell_index(ix, iy - 1), af / h2);
                    diag -= af / h2;
                }
                if (iy < n - 1) {
                    const double af = coeffs.a_value(t, xc, (iy + 1) * grid.h);
                    check_elliptic(af, t, xc, (iy + 1) * grid.h, 2);
                    trip.emplace_back(idx, grid.cell_index(ix, iy + 1), af / h2);
                    diag -= af / h2;
                }
                trip.emplace_back(idx, idx, diag);
            }
        }
    }
    SpMat A(grid.num_interior(), grid.num_interior());
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

Vec sparse_shifted_solve(const SpMat& A, double lambda, const Vec& rhs) {
    SpMat S(A.rows(), A.cols());
    S.setIdentity();
    S = lambda * S - A;
    Eigen::SimplicialLDLT<SpMat> ldlt(S);
    if (ldlt.info() == Eigen::Success) {
        const double minpiv = ldlt.vectorD().cwiseAbs().minCoeff();
        if (minpiv > 1e-13) return ldlt.solve(rhs);
    }
    // Indefinite or near-singular for LDLT: try a pivoting LU before failing.
    Eigen::SparseLU<SpMat> lu(S);
    if (lu.info() != Eigen::Success) {
        std::ostringstream os;
        os << "resolvent: near-singular system at lambda = " << lambda;
        throw std::domain_error(os.str());
    }
    Vec x = lu.solve(rhs);
    if ((S * x - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm())) {
        std::ostringstream os;
        os << "resolvent: near-singular system at lambda = " << lambda;
        throw std::domain_error(os.str());
    }
    return x;
}

OperatorFamily::OperatorFamily(Grid grid, CoefficientField coeffs, double shift_w)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)), shift_w_(shift_w) {
    if (shift_w < 0.0) throw std::invalid_argument("OperatorFamily: shift_w must be >= 0");
    coeffs_.dim = grid_.dim;
}

uint64_t OperatorFamily::time_key(double t) {
    uint64_t k;
    std::memcpy(&k, &t, sizeof(k));
    return k;
}

const OperatorFamily::Entry* OperatorFamily::find(double t) const {
    auto it = cache_.find(time_key(t));
    return it == cache_.end() ? nullptr : &it->second;
}

void OperatorFamily::prepare(const std::vector<double>& times, double dt) {
    if (prepared_) throw std::logic_error("OperatorFamily::prepare called twice");
    prepared_dt_ = dt;
    const int N = grid_.num_interior();
    SpMat I(N, N);
    I.setIdentity();
    for (double t : times) {
        if (cache_.count(time_key(t))) continue;
        Entry e;
        e.A = assemble(coeffs_, grid_, t);
        if (dt > 0.0) {
            SpMat S = I - dt * e.A;
            auto f = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(S);
            if (f->info() == Eigen::Success && f->vectorD().cwiseAbs().minCoeff() > 1e-13)
                e.step_factor = std::move(f);
        }
        {
            SpMat S = shift_w_ * I - e.A;
            auto f = std::make_shared<Eigen::SimplicialLDLT<SpMat>>(S);
            if (f->info() == Eigen::Success && f->vectorD().cwiseAbs().minCoeff() > 1e-13)
                e.shifted_factor = std::move(f);
        }
        cache_.emplace(time_key(t), std::move(e));
    }
    prepared_ = true;
}

SpMat OperatorFamily::matrix(double t) const {
    if (const Entry* e = find(t)) return e->A;
    return assemble(coeffs_, grid_, t);
}

Vec OperatorFamily::resolvent_apply(double t, double lambda, const Vec& rhs) const {
    return sparse_shifted_solve(matrix(t), lambda, rhs);
}

Vec OperatorFamily::step_solve(double t, double dt, const Vec& rhs) const {
    if (dt == prepared_dt_) {
        if (const Entry* e = find(t); e && e->step_factor) return e->step_factor->solve(rhs);
    }
    // (I - dt A)^{-1} rhs == (1/dt) ((1/dt) - A)^{-1} rhs
    return sparse_shifted_solve(matrix(t), 1.0 / dt, rhs / dt);
}

Vec OperatorFamily::shifted_solve(double t, const Vec& rhs) const {
    if (const Entry* e = find(t); e && e->shifted_factor) return e->shifted_factor->solve(rhs);
    return sparse_shifted_solve(matrix(t), shift_w_, rhs);
}

SpectralData OperatorFamily::compute_spectral(double t) const {
    if (grid_.dim == 2 && grid_.n > 64)
        throw std::invalid_argument("spectral: dense decomposition limited to n <= 64 per axis in 2D");
    if (grid_.dim == 1 && grid_.n > 2048)
        throw std::invalid_argument("spectral: dense decomposition limited to n <= 2048 in 1D");
    Mat Ad = Mat(matrix(t));
    Eigen::SelfAdjointEigenSolver<Mat> es(Ad);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral: eigensolve failed");
    SpectralData sd;
    sd.eigenvalues = es.eigenvalues();
    sd.eigenvectors = es.eigenvectors();
    return sd;
}

const SpectralData& OperatorFamily::spectral(double t) const {
    const uint64_t key = time_key(t);
    {
        std::lock_guard<std::mutex> lock(g_spectral_mutex);
        auto it = spectral_cache_.find(key);
        if (it != spectral_cache_.end()) return *it->second;
    }
    auto sd = std::make_shared<SpectralData>(compute_spectral(t));
    std::lock_guard<std::mutex> lock(g_spectral_mutex);
    auto [it, inserted] = spectral_cache_.emplace(key, std::move(sd));
    return *it->second;
}

Vec OperatorFamily::fractional_power_apply(double t, double theta, const Vec& f) const {
    if (theta < -1.0 || theta > 1.0)
        throw std::invalid_argument("fractional_power_apply: theta must lie in [-1, 1]");
    if (theta == 0.0) return f;
    const SpectralData& sd = spectral(t);
    Vec c = sd.eigenvectors.transpose() * f;
    for (int i = 0; i < c.size(); ++i) {
        const double nu = shift_w_ - sd.eigenvalues[i];
        if (nu <= 0.0)
            throw std::domain_error("fractional_power_apply: spectrum not below the shift");
        c[i] *= std::pow(nu, theta);
    }
    return sd.eigenvectors * c;
}

double OperatorFamily::fractional_norm(double t, double eta, const Vec& f, double p) const {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("fractional_norm: eta must lie in [0, 1]");
    if (eta == 0.0) return lp_norm(grid_, f, p);
    return lp_norm(grid_, fractional_power_apply(t, eta, f), p);
}

double OperatorFamily::max_eigenvalue(double t) const {
    const SpectralData& sd = spectral(t);
    return sd.eigenvalues[sd.eigenvalues.size() - 1];
}

void OperatorFamily::export_triplets(double t, std::ostream& os) const {
    const SpMat A = matrix(t);
    os.precision(17);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it)
            os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

} // namespace bnspde
