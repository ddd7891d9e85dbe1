#include "core/diagnostics.hpp"

#include "core/evolution.hpp"
#include "core/grid.hpp"
#include "core/operator_family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bnspde {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const int m = static_cast<int>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = m * sxx - sx * sx;
    LineFit fit;
    fit.slope = (m * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / m;
    for (int i = 0; i < m; ++i) {
        const double pred = fit.intercept + fit.slope * xs[i];
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double median_of(std::vector<double> vals) {
    std::sort(vals.begin(), vals.end());
    const size_t m = vals.size();
    return (m % 2 == 1) ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
}

int exact_log2(int v) {
    int s = 0;
    while ((1 << (s + 1)) <= v) ++s;
    return s;
}

} // namespace

std::string NormSpec::name() const {
    std::ostringstream os;
    if (eta > 0.0) os << "frac" << eta << "-";
    os << "L";
    if (std::isinf(p)) {
        os << "inf";
    } else {
        os << p;
    }
    return os.str();
}

std::function<double(const Vec&, const Vec&)> NormSpec::increment_norm(const Grid& g) const {
    if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: p must be >= 1");
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("NormSpec: eta must lie in [0, 1]");
    if (eta > 0.0 && family == nullptr)
        throw std::invalid_argument("NormSpec: a fractional norm needs an operator family");
    if (eta > 0.0) {
        // The fractional norm is anchored at the initial time; it defines one
        // fixed reference space for the whole path.
        const OperatorFamily* fam = family;
        const double pp = p, e = eta;
        return [fam, pp, e](const Vec& a, const Vec& b) {
            return fam->fractional_norm(0.0, e, a - b, pp);
        };
    }
    const Grid gc = g;
    const double pp = p;
    return [gc, pp](const Vec& a, const Vec& b) { return lp_norm(gc, a - b, pp); };
}

HolderAccumulator::HolderAccumulator(int max_level, double snapshot_dt, IncrementNorm inc)
    : max_level_(max_level), dt_(snapshot_dt), inc_(std::move(inc)) {
    if (max_level_ < 0 || max_level_ > 30)
        throw std::invalid_argument("HolderAccumulator: max_level out of range");
    if (!(dt_ > 0.0))
        throw std::invalid_argument("HolderAccumulator: snapshot spacing must be positive");
    if (!inc_) throw std::invalid_argument("HolderAccumulator: missing increment norm");
    ring_.resize((size_t(1) << max_level_) + 1);
    sups_.assign(size_t(max_level_) + 1, 0.0);
    counts_.assign(size_t(max_level_) + 1, 0);
}

void HolderAccumulator::push(const Vec& state) {
    const long long ring = static_cast<long long>(ring_.size());
    ring_[size_t(count_ % ring)] = state;
    for (int j = 0; j <= max_level_; ++j) {
        const long long lag = 1LL << j;
        if (count_ >= lag) {
            const Vec& past = ring_[size_t((count_ - lag) % ring)];
            sups_[size_t(j)] = std::max(sups_[size_t(j)], inc_(state, past));
            ++counts_[size_t(j)];
        }
    }
    ++count_;
}

double HolderAccumulator::sup_increment(int level) const {
    if (level < 0 || level > max_level_)
        throw std::invalid_argument("HolderAccumulator: level out of range");
    return sups_[size_t(level)];
}

long long HolderAccumulator::comparisons(int level) const {
    if (level < 0 || level > max_level_)
        throw std::invalid_argument("HolderAccumulator: level out of range");
    return counts_[size_t(level)];
}

HolderEstimate HolderAccumulator::fit(int j_min, int j_max) const {
    if (j_min < 0 || j_max > max_level_ || j_max - j_min + 1 < 3)
        throw std::invalid_argument(
            "holder fit: window must span at least 3 dyadic levels inside the accumulator");
    for (int j = j_min; j <= j_max; ++j) {
        if (counts_[size_t(j)] < 1)
            throw std::invalid_argument("holder fit: lattice too short for the requested window");
    }
    HolderEstimate est;
    est.j_min = j_min;
    est.j_max = j_max;
    for (int j = j_min; j <= j_max; ++j) {
        if (!(sups_[size_t(j)] > 0.0)) {
            est.constant_path = true;
            return est;
        }
    }
    std::vector<double> xs, ys;
    xs.reserve(size_t(j_max - j_min + 1));
    ys.reserve(size_t(j_max - j_min + 1));
    for (int j = j_min; j <= j_max; ++j) {
        xs.push_back(std::log2(double(1LL << j) * dt_));
        ys.push_back(std::log2(sups_[size_t(j)]));
    }
    const LineFit fit = least_squares(xs, ys);
    est.exponent = std::clamp(fit.slope, 0.0, 1.5);
    est.intercept = fit.intercept;
    est.r2 = fit.r2;
    return est;
}

HolderEstimate holder_exponent(const Trajectory& traj, const NormSpec& norm, int j_min, int j_max,
                               bool subtract_free_part) {
    const int M = traj.lattice.M;
    if (M < 64) throw std::invalid_argument("holder_exponent: needs at least 64 time steps");
    if (static_cast<int>(traj.states.size()) != M + 1)
        throw std::invalid_argument("holder_exponent: trajectory does not cover its lattice");
    if (norm.family == nullptr)
        throw std::invalid_argument("holder_exponent: the norm must carry the operator family");
    if ((1LL << j_max) > M)
        throw std::invalid_argument("holder_exponent: window exceeds the lattice depth");
    const Grid& g = norm.family->grid();
    HolderAccumulator acc(j_max, traj.lattice.dt(), norm.increment_norm(g));
    const bool do_free = subtract_free_part && !(traj.states[0].array() == 0.0).all();
    Vec free_part;
    if (do_free) free_part = traj.states[0];
    for (int k = 0; k <= M; ++k) {
        if (k > 0 && do_free)
            free_part = propagate(*norm.family, traj.lattice, k - 1, k, free_part);
        if (do_free) {
            acc.push(traj.states[size_t(k)] - free_part);
        } else {
            acc.push(traj.states[size_t(k)]);
        }
    }
    HolderEstimate est = acc.fit(j_min, j_max);
    est.norm_name = norm.name();
    return est;
}

HolderEstimate holder_exponent_scalar(const std::vector<double>& path, double dt, int j_min,
                                      int j_max) {
    const long long M = static_cast<long long>(path.size()) - 1;
    if (M < 64) throw std::invalid_argument("holder_exponent: needs at least 64 time steps");
    if (!(dt > 0.0)) throw std::invalid_argument("holder_exponent: dt must be positive");
    if ((1LL << j_max) > M)
        throw std::invalid_argument("holder_exponent: window exceeds the lattice depth");
    HolderAccumulator acc(j_max, dt,
                          [](const Vec& a, const Vec& b) { return std::abs(a[0] - b[0]); });
    Vec v(1);
    for (double x : path) {
        v[0] = x;
        acc.push(v);
    }
    HolderEstimate est = acc.fit(j_min, j_max);
    est.norm_name = "abs";
    return est;
}

double regularity_cap(bool g_active, bool b_active, bool c_active, double theta_G, double theta_B,
                      double theta_C) {
    double cap = std::numeric_limits<double>::infinity();
    if (g_active) cap = std::min(cap, 1.0 - theta_G);
    if (b_active) cap = std::min(cap, 0.5 - theta_B);
    if (c_active) cap = std::min(cap, 0.5 - theta_C);
    return cap;
}

RegularityBand regularity_band_check(const SpdeSystem& sys, const SteppingLattice& lat,
                                     const RegularityRequest& req) {
    validate_system(sys);
    if (!(req.alpha > 1.0 && req.alpha < 2.0))
        throw std::invalid_argument("regularity_band_check: alpha outside (1, 2)");
    if (!(req.theta_B >= 0.0 && req.theta_B < 0.5))
        throw std::invalid_argument("regularity_band_check: theta_B outside [0, 1/2)");
    if (!(req.theta_C > 1.0 - req.alpha / 2.0 && req.theta_C < 0.5))
        throw std::invalid_argument("regularity_band_check: theta_C outside (1 - alpha/2, 1/2)");
    if (!(req.theta_G > 1.0 - req.alpha / 2.0 && req.theta_G < 1.0))
        throw std::invalid_argument("regularity_band_check: theta_G outside (1 - alpha/2, 1)");
    if (!(req.delta >= 0.0 && req.delta <= 1.0))
        throw std::invalid_argument("regularity_band_check: delta outside [0, 1]");
    if (req.paths < 1)
        throw std::invalid_argument("regularity_band_check: needs at least one path");
    if (lat.M < 64)
        throw std::invalid_argument("regularity_band_check: needs at least 64 time steps");
    const int stride = req.snapshot_stride;
    if (stride < 1 || (stride & (stride - 1)) != 0)
        throw std::invalid_argument("regularity_band_check: snapshot stride must be a power of two");
    if (lat.M % stride != 0)
        throw std::invalid_argument("regularity_band_check: snapshot stride must divide M");
    const int shift = exact_log2(stride);
    if (req.j_min < shift)
        throw std::invalid_argument(
            "regularity_band_check: snapshot stride exceeds the smallest window lag");
    if (req.j_max - req.j_min + 1 < 3)
        throw std::invalid_argument(
            "regularity_band_check: window must span at least 3 dyadic levels");
    if ((1LL << req.j_max) > lat.M)
        throw std::invalid_argument("regularity_band_check: window exceeds the lattice depth");

    const bool g_active = !sys.G.is_zero();
    const bool b_active = sys.interior_noise_active();
    const bool c_active = sys.boundary_noise_active();
    const double cap = regularity_cap(g_active, b_active, c_active, req.theta_G, req.theta_B,
                                      req.theta_C);
    const bool binding = (b_active && 0.5 - req.theta_B == cap) ||
                         (c_active && 0.5 - req.theta_C == cap);

    const Grid& g = sys.family->grid();
    NormSpec norm;
    norm.p = req.p_norm;
    norm.eta = req.delta;
    norm.family = sys.family;
    const auto inc = norm.increment_norm(g);

    // Deterministic free part, shared by all paths; skipped entirely for a
    // zero start (subtracting an exact zero would be a no-op).
    const bool do_free = req.subtract_free_part && !(sys.u0.array() == 0.0).all();
    std::vector<Vec> free_snaps;
    if (do_free) {
        free_snaps.reserve(size_t(lat.M / stride) + 1);
        Vec f = sys.u0;
        for (int k = 0; k <= lat.M; ++k) {
            if (k > 0) f = propagate(*sys.family, lat, k - 1, k, f);
            if (k % stride == 0) free_snaps.push_back(f);
        }
    }

    RegularityBand band;
    band.cap = cap;
    band.delta = req.delta;
    band.noise_binding = binding;
    band.q = req.q;
    band.j_min = req.j_min;
    band.j_max = req.j_max;
    band.norm_name = norm.name();
    band.per_path.assign(size_t(req.paths), std::numeric_limits<double>::quiet_NaN());

    double max_lq = 0.0;
    for (int pth = 0; pth < req.paths; ++pth) {
        IncrementStream stream{req.master_seed, static_cast<uint64_t>(pth), lat.M, lat.T};
        HolderAccumulator acc(req.j_max - shift, stride * lat.dt(), inc);
        double path_lq = 0.0;
        run_path_streaming(sys, lat, stream, stride, [&](int k, double, const Vec& state) {
            if (k % stride != 0) return;
            if (req.q > 0.0) path_lq = std::max(path_lq, lp_norm(g, state, req.q));
            if (do_free) {
                acc.push(state - free_snaps[size_t(k / stride)]);
            } else {
                acc.push(state);
            }
        });
        HolderEstimate est = acc.fit(req.j_min - shift, req.j_max - shift);
        if (!est.constant_path) band.per_path[size_t(pth)] = est.exponent;
        max_lq = std::max(max_lq, path_lq);
    }
    band.max_lq = max_lq;

    std::vector<double> vals;
    vals.reserve(band.per_path.size());
    for (double v : band.per_path) {
        if (!std::isnan(v)) vals.push_back(v);
    }
    if (vals.empty()) {
        band.constant_path = true;
        band.upper_pass = false;
        band.lower_pass = false;
        band.pass = false;
        return band;
    }
    band.median_exponent = median_of(vals);
    band.upper_pass = band.median_exponent <= cap - req.delta + 0.10;
    band.lower_pass = !binding || band.median_exponent >= cap - req.delta - 0.15;
    band.pass = band.upper_pass && band.lower_pass;
    return band;
}

ConvergenceStudy strong_convergence_study(const SpdeSystem& sys, double T,
                                          const std::vector<int>& level_M, int fine_M, int paths,
                                          uint64_t master_seed) {
    validate_system(sys);
    if (static_cast<int>(level_M.size()) < 3)
        throw std::invalid_argument("strong_convergence_study: needs at least 3 lattice levels");
    if (paths < 32)
        throw std::invalid_argument("strong_convergence_study: needs at least 32 coupled paths");
    if (fine_M < 2)
        throw std::invalid_argument("strong_convergence_study: fine step count must be >= 2");
    for (int M : level_M) {
        if (M < 2 || M > fine_M || fine_M % M != 0)
            throw std::invalid_argument(
                "strong_convergence_study: every level must divide the fine step count");
    }

    const Grid& g = sys.family->grid();
    const SteppingLattice fine = make_lattice(T, fine_M);
    std::vector<SteppingLattice> lats;
    lats.reserve(level_M.size());
    for (int M : level_M) lats.push_back(make_lattice(T, M));

    std::vector<double> sq(level_M.size(), 0.0);
    for (int pth = 0; pth < paths; ++pth) {
        IncrementStream stream{master_seed, static_cast<uint64_t>(pth), fine_M, T};
        Vec fine_state = sys.u0;
        for (int k = 0; k < fine_M; ++k) fine_state = step(sys, fine, stream, k, fine_state);
        for (size_t l = 0; l < lats.size(); ++l) {
            Vec u = sys.u0;
            for (int k = 0; k < level_M[l]; ++k) u = step(sys, lats[l], stream, k, u);
            const Vec d = u - fine_state;
            sq[l] += wdot(g, d, d);
        }
    }

    ConvergenceStudy study;
    study.level_M = level_M;
    study.fine_M = fine_M;
    study.paths = paths;
    study.errors.resize(level_M.size());
    for (size_t l = 0; l < sq.size(); ++l)
        study.errors[l] = std::sqrt(sq[l] / double(paths));

    std::vector<double> xs, ys;
    for (size_t l = 0; l < study.errors.size(); ++l) {
        if (study.errors[l] > 0.0) {
            xs.push_back(std::log2(T / double(level_M[l])));
            ys.push_back(std::log2(study.errors[l]));
        }
    }
    if (xs.size() >= 2) study.rate = least_squares(xs, ys).slope;
    return study;
}

} // namespace bnspde
