#include "core/mild_solver.hpp"

#include "core/rng.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bnspde {

namespace {

constexpr double kPi = std::numbers::pi;

void check_finite(const Vec& state, int step_index, double t, double last_norm) {
    if (state.allFinite()) return;
    std::ostringstream os;
    os.precision(17);
    os << "run_path: state stopped being finite at step " << step_index << " (t = " << t
       << "); last finite L2 norm was " << last_norm;
    throw std::runtime_error(os.str());
}

} // namespace

void validate_system(const SpdeSystem& sys) {
    if (sys.family == nullptr) throw std::invalid_argument("system: operator family is required");
    const Grid& g = sys.family->grid();
    if (sys.u0.size() != g.num_interior())
        throw std::invalid_argument("system: initial state does not match the grid");
    const bool boundary_terms = !sys.G.is_zero() || sys.boundary_noise_active();
    if (boundary_terms) {
        if (sys.boundary == nullptr)
            throw std::invalid_argument("system: boundary terms need a boundary map");
        if (&sys.boundary->family() != sys.family)
            throw std::invalid_argument("system: boundary map belongs to a different family");
    }
    if (sys.interior_noise_active()) {
        if (sys.interior_noise.target != NoiseTarget::Interior)
            throw std::invalid_argument("system: interior slot holds a non-interior noise model");
        if (sys.interior_noise.kind == NoiseKind::Spectral &&
            sys.interior_noise.modes.rows() != g.num_interior())
            throw std::invalid_argument("system: interior noise modes do not match the grid");
    }
    if (sys.boundary_noise_active()) {
        if (sys.boundary_noise.target != NoiseTarget::Boundary)
            throw std::invalid_argument("system: boundary slot holds a non-boundary noise model");
        if (sys.boundary_noise.modes.rows() != g.num_boundary())
            throw std::invalid_argument("system: boundary noise modes do not match the grid");
    }
}

Vec step(const SpdeSystem& sys, const SteppingLattice& lattice, const IncrementStream& stream,
         int k, const Vec& state) {
    const Grid& g = sys.family->grid();
    const double dt = lattice.dt();
    const double tk = lattice.time(k);

    Vec rhs = state;
    if (!sys.F.is_zero()) rhs += dt * sys.F.apply(state);

    Vec tr;
    bool have_trace = false;
    if (!sys.G.is_zero()) {
        tr = trace(g, state);
        have_trace = true;
        rhs += dt * sys.boundary->lambda_apply(tk, sys.G.apply(tr));
    }
    if (sys.interior_noise_active()) {
        Vec dw = couple_to_coarse(sys.interior_noise, g, stream, lattice.M, k);
        rhs += sys.B.apply(state).cwiseProduct(dw);
    }
    if (sys.boundary_noise_active()) {
        if (!have_trace) tr = trace(g, state);
        Vec dw = couple_to_coarse(sys.boundary_noise, g, stream, lattice.M, k);
        rhs += sys.boundary->lambda_apply(tk, sys.C.apply(tr).cwiseProduct(dw));
    }
    return sys.family->step_solve(lattice.time(k + 1), dt, rhs);
}

Trajectory run_path(const SpdeSystem& sys, const SteppingLattice& lattice,
                    const IncrementStream& stream, uint64_t fingerprint) {
    validate_system(sys);
    Trajectory out;
    out.lattice = lattice;
    out.fingerprint = fingerprint;
    out.states.reserve(static_cast<size_t>(lattice.M) + 1);
    out.states.push_back(sys.u0);
    for (int k = 0; k < lattice.M; ++k) {
        Vec next = step(sys, lattice, stream, k, out.states.back());
        check_finite(next, k + 1, lattice.time(k + 1),
                     std::sqrt(wdot(sys.family->grid(), out.states.back(), out.states.back())));
        out.states.push_back(std::move(next));
    }
    return out;
}

bool fast_path_eligible(const SpdeSystem& sys) {
    if (sys.family == nullptr || sys.boundary == nullptr) return false;
    const Grid& g = sys.family->grid();
    if (g.dim != 2) return false;
    if (sys.family->coeffs().kind != CoeffKind::Constant) return false;
    if (sys.family->shift() != 0.0) return false;
    if (!sys.F.is_zero() || sys.interior_noise_active()) return false;
    if (!(sys.G.is_zero() || sys.G.kind == NonlinKind::Constant)) return false;
    if (!sys.boundary_noise_active()) return false;
    if (sys.C.kind != NonlinKind::Constant) return false;
    if (sys.boundary_noise.kind != NoiseKind::Spectral) return false;
    if (sys.u0.size() == 0 || !(sys.u0.array() == sys.u0[0]).all()) return false;
    return true;
}

namespace {

// FFTW plan creation is not thread safe; execution of distinct plans is.
std::mutex g_fftw_plan_mutex;

// Closed-form spectral integrator for the additive-boundary-noise case on a
// 2-d grid with constant coefficients and absorbed shift. The state is kept
// as coefficients against the orthonormal eigenbasis
//   v_{kx,ky}(ix,iy) = nrm(kx) nrm(ky) cos(kx pi (ix+1/2) h) cos(ky pi (iy+1/2) h),
// where each transition divides by (1 - dt mu) modewise after adding the
// modal expansion of the injected boundary increment. The increment itself is
// synthesized on the perimeter with one complex FFT (the loop modes are DFT
// harmonics in arc length), reduced to per-edge cosine coefficients with
// length-n DCTs, and scattered to the 2-d modal array as four rank-one
// updates. Physical snapshots are produced on demand by an inverse DCT.
class FastBoundaryIntegrator {
  public:
    FastBoundaryIntegrator(const SpdeSystem& sys, const SteppingLattice& lattice,
                           const IncrementStream& stream)
        : sys_(sys), lattice_(lattice), stream_(stream), g_(sys.family->grid()), n_(g_.n),
          L_(4 * g_.n) {
        const double h = g_.h;
        const double dt = lattice.dt();
        const double a = sys.family->coeffs().a_value(0.0, 0.5, 0.5);
        const double a0 = sys.family->coeffs().a0_value(0.0, 0.5, 0.5);

        Vec mu1(n_);
        for (int k = 0; k < n_; ++k) {
            const double s = std::sin(0.5 * k * kPi * h);
            mu1[k] = -4.0 / (h * h) * s * s;
        }
        recip_ = Mat(n_, n_);
        for (int ky = 0; ky < n_; ++ky)
            for (int kx = 0; kx < n_; ++kx)
                recip_(kx, ky) = 1.0 / (1.0 - dt * (a * (mu1[kx] + mu1[ky]) + a0));

        colfac_even_ = Vec::Zero(n_);
        colfac_odd_ = Vec::Zero(n_);
        for (int k = 0; k < n_; ++k) {
            const double nrm = k == 0 ? 1.0 : std::numbers::sqrt2;
            const double v = nrm * std::cos(0.5 * k * kPi * h); // eigenvector at the first cell
            (k % 2 == 0 ? colfac_even_ : colfac_odd_)[k] = v;
        }
        dct_scale_ = Vec(n_);
        for (int k = 0; k < n_; ++k) dct_scale_[k] = 0.5 * h * (k == 0 ? 1.0 : std::numbers::sqrt2);
        emit_scale_ = Mat(n_, n_);
        for (int ky = 0; ky < n_; ++ky)
            for (int kx = 0; kx < n_; ++kx)
                emit_scale_(kx, ky) = (kx == 0 ? 1.0 : 1.0 / std::numbers::sqrt2) *
                                      (ky == 0 ? 1.0 : 1.0 / std::numbers::sqrt2);

        const NoiseModel& nm = sys.boundary_noise;
        const double cC = sys.C.c0;
        mode_fac_ = Vec(nm.rank());
        for (int m = 0; m < nm.rank(); ++m) {
            const double amp = cC * std::sqrt(nm.lambdas[m] * dt);
            mode_fac_[m] = amp * (m == 0 ? 0.5 : 1.0 / std::numbers::sqrt2);
        }

        {
            std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
            z_in_ = fftw_alloc_complex(static_cast<size_t>(L_));
            z_out_ = fftw_alloc_complex(static_cast<size_t>(L_));
            strip_ = fftw_alloc_real(static_cast<size_t>(n_));
            field_ = fftw_alloc_real(static_cast<size_t>(n_) * n_);
            loop_plan_ = fftw_plan_dft_1d(L_, z_in_, z_out_, FFTW_BACKWARD, FFTW_ESTIMATE);
            strip_plan_ = fftw_plan_r2r_1d(n_, strip_, strip_, FFTW_REDFT10, FFTW_ESTIMATE);
            inv_plan_ = fftw_plan_r2r_2d(n_, n_, field_, field_, FFTW_REDFT01, FFTW_REDFT01,
                                         FFTW_ESTIMATE);
        }

        // Deterministic per-step boundary drift dt * Lambda (g0 1) in modal form.
        gdrift_ = Mat::Zero(n_, n_);
        if (!sys.G.is_zero()) {
            Vec ones_data = Vec::Constant(L_, sys.G.c0 * dt);
            accumulate_boundary_forcing(ones_data, gdrift_);
        }

        state_ = Mat::Zero(n_, n_);
        state_(0, 0) = sys.u0[0];
    }

    ~FastBoundaryIntegrator() {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        fftw_destroy_plan(loop_plan_);
        fftw_destroy_plan(strip_plan_);
        fftw_destroy_plan(inv_plan_);
        fftw_free(z_in_);
        fftw_free(z_out_);
        fftw_free(strip_);
        fftw_free(field_);
    }

    FastBoundaryIntegrator(const FastBoundaryIntegrator&) = delete;
    FastBoundaryIntegrator& operator=(const FastBoundaryIntegrator&) = delete;

    void run(int stride, const StateCallback& cb) {
        cb(0, 0.0, sys_.u0);
        const bool has_g = !sys_.G.is_zero();
        for (int k = 0; k < lattice_.M; ++k) {
            synthesize_loop_increment(k);
            transition(loop_, has_g);
            const int k1 = k + 1;
            if (k1 % stride == 0 || k1 == lattice_.M) emit(k1, cb);
        }
    }

  private:
    // Boundary increment C . dW on the perimeter nodes for one step, via the
    // loop-mode DFT: modes are cos/sin(2 pi p arc/4) with arc_l = (l+1/2) h,
    // i.e. harmonics exp(2 pi i p (l+1/2)/L).
    void synthesize_loop_increment(int k) {
        for (int l = 0; l < L_; ++l) z_in_[l][0] = z_in_[l][1] = 0.0;
        const NoiseModel& nm = sys_.boundary_noise;
        for (int m = 0; m < nm.rank(); ++m) {
            const double xi = normal_draw(stream_.master_seed, kStreamBoundary,
                                          stream_.path_index, static_cast<uint64_t>(k),
                                          static_cast<uint64_t>(m));
            const double w = mode_fac_[m] * xi;
            const int pair = (m + 1) / 2;
            if (m == 0) {
                z_in_[0][0] += w;
            } else if (m % 2 == 1) {
                z_in_[pair][0] += w; // cos component: Re part
            } else {
                z_in_[pair][1] -= w; // sin component: -Im part
            }
        }
        // Half-sample phase shift exp(i pi p / L).
        const int pmax = (nm.rank() + 1) / 2;
        for (int p = 0; p <= pmax && p < L_; ++p) {
            const double cph = std::cos(kPi * p / L_);
            const double sph = std::sin(kPi * p / L_);
            const double re = z_in_[p][0], im = z_in_[p][1];
            z_in_[p][0] = re * cph - im * sph;
            z_in_[p][1] = re * sph + im * cph;
        }
        fftw_execute(loop_plan_);
        loop_.resize(L_);
        for (int l = 0; l < L_; ++l) loop_[l] = z_out_[l][0];
    }

    // Adds the modal coefficients of E(data) to `target`, where `data` holds
    // perimeter values in loop order (bottom L->R, right B->T, top R->L,
    // left T->B). Each edge contributes a rank-one update: its own 1-d cosine
    // spectrum times the transverse eigenvector value at the adjacent cell
    // row. The (-1)^k alternation from the far edges is folded into the
    // even/odd split of the transverse factor.
    void accumulate_boundary_forcing(const Vec& data, Mat& target) {
        Vec bottom = edge_spectrum([&](int i) { return data[i]; });
        Vec right = edge_spectrum([&](int i) { return data[n_ + i]; });
        Vec top = edge_spectrum([&](int i) { return data[2 * n_ + (n_ - 1 - i)]; });
        Vec left = edge_spectrum([&](int i) { return data[3 * n_ + (n_ - 1 - i)]; });

        Vec bt_plus = bottom + top;
        Vec bt_minus = bottom - top;
        Vec lr_plus = left + right;
        Vec lr_minus = left - right;
        // Horizontal edges: rows kx carry the edge spectrum, columns ky the
        // transverse factor nrm(ky) cos(ky pi h/2) with sign (-1)^ky for top.
        target.noalias() += bt_plus * colfac_even_.transpose();
        target.noalias() += bt_minus * colfac_odd_.transpose();
        // Vertical edges: transpose roles; sign (-1)^kx for the right edge.
        target.noalias() += colfac_even_ * lr_plus.transpose();
        target.noalias() += colfac_odd_ * lr_minus.transpose();
    }

    // One step: state <- (state [+ gdrift] + E(data)) ./ (1 - dt mu). Same
    // rank-one structure as accumulate_boundary_forcing, but fused with the
    // resolvent divide into a single pass over the modal state (the step loop
    // is memory-bound at large n, so extra sweeps dominate the cost).
    void transition(const Vec& data, bool add_gdrift) {
        Vec bottom = edge_spectrum([&](int i) { return data[i]; });
        Vec right = edge_spectrum([&](int i) { return data[n_ + i]; });
        Vec top = edge_spectrum([&](int i) { return data[2 * n_ + (n_ - 1 - i)]; });
        Vec left = edge_spectrum([&](int i) { return data[3 * n_ + (n_ - 1 - i)]; });
        const Vec bt_plus = bottom + top;
        const Vec bt_minus = bottom - top;
        const Vec lr_plus = left + right;
        const Vec lr_minus = left - right;
        for (int ky = 0; ky < n_; ++ky) {
            auto col = state_.col(ky);
            if (add_gdrift) {
                col.array() = (col + gdrift_.col(ky) + bt_plus * colfac_even_[ky] +
                               bt_minus * colfac_odd_[ky] + colfac_even_ * lr_plus[ky] +
                               colfac_odd_ * lr_minus[ky])
                                  .array() *
                              recip_.col(ky).array();
            } else {
                col.array() = (col + bt_plus * colfac_even_[ky] + bt_minus * colfac_odd_[ky] +
                               colfac_even_ * lr_plus[ky] + colfac_odd_ * lr_minus[ky])
                                  .array() *
                              recip_.col(ky).array();
            }
        }
    }

    template <class F> Vec edge_spectrum(F&& value) {
        for (int i = 0; i < n_; ++i) strip_[i] = value(i);
        fftw_execute(strip_plan_);
        Vec out(n_);
        for (int k = 0; k < n_; ++k) out[k] = dct_scale_[k] * strip_[k];
        return out;
    }

    void emit(int k1, const StateCallback& cb) {
        // field_[ky * n + kx] is exactly the column-major linear index of
        // state_(kx, ky), so the DCT input is one vectorized rescale.
        Eigen::Map<Mat>(field_, n_, n_) = state_.cwiseProduct(emit_scale_);
        fftw_execute(inv_plan_);
        Vec phys = Eigen::Map<Vec>(field_, static_cast<Eigen::Index>(n_) * n_);
        cb(k1, lattice_.time(k1), phys);
    }

    const SpdeSystem& sys_;
    SteppingLattice lattice_;
    IncrementStream stream_;
    const Grid& g_;
    int n_;
    int L_;
    Mat recip_;
    Mat gdrift_;
    Mat state_;
    Vec colfac_even_, colfac_odd_;
    Vec dct_scale_;
    Mat emit_scale_;
    Vec mode_fac_;
    Vec loop_;
    fftw_complex* z_in_ = nullptr;
    fftw_complex* z_out_ = nullptr;
    double* strip_ = nullptr;
    double* field_ = nullptr;
    fftw_plan loop_plan_ = nullptr;
    fftw_plan strip_plan_ = nullptr;
    fftw_plan inv_plan_ = nullptr;
};

} // namespace

void run_path_streaming(const SpdeSystem& sys, const SteppingLattice& lattice,
                        const IncrementStream& stream, int stride, const StateCallback& cb,
                        bool allow_fast_path) {
    validate_system(sys);
    if (stride < 1) throw std::invalid_argument("run_path_streaming: stride must be >= 1");

    if (allow_fast_path && fast_path_eligible(sys) && stream.fine_M == lattice.M) {
        FastBoundaryIntegrator fast(sys, lattice, stream);
        fast.run(stride, cb);
        return;
    }

    Vec state = sys.u0;
    cb(0, 0.0, state);
    double last_norm = std::sqrt(wdot(sys.family->grid(), state, state));
    for (int k = 0; k < lattice.M; ++k) {
        state = step(sys, lattice, stream, k, state);
        check_finite(state, k + 1, lattice.time(k + 1), last_norm);
        last_norm = std::sqrt(wdot(sys.family->grid(), state, state));
        const int k1 = k + 1;
        if (k1 % stride == 0 || k1 == lattice.M) cb(k1, lattice.time(k1), state);
    }
}

double steady_state_residual(const SpdeSystem& sys, const Vec& state) {
    // The scheme's autonomous fixed point solves -A_h U = F(U): plug the
    // final state into that equation and report the weighted L2 residual.
    const SpMat A = sys.family->matrix(0.0);
    Vec r = -(A * state) - sys.F.apply(state);
    return std::sqrt(wdot(sys.family->grid(), r, r));
}

} // namespace bnspde
