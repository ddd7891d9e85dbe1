#pragma once
// Pathwise temporal-regularity estimation from dyadic sup-increments, strong
// self-convergence studies over coupled driving noise, and the consistency
// check of measured exponents against the configured smoothing-exponent box.

#include "core/mild_solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace bnspde {

// Norm used for path increments: plain weighted L^p when eta = 0, or the
// fractional norm || (shift - A)^eta . ||_{L^p} through `family` when eta > 0.
struct NormSpec {
    double p = 2.0;
    double eta = 0.0;
    const OperatorFamily* family = nullptr;

    std::string name() const;
    std::function<double(const Vec&, const Vec&)> increment_norm(const Grid& g) const;
};

struct HolderEstimate {
    double exponent = 0.0;  // clamped to [0, 1.5]
    double intercept = 0.0; // log2 of the fitted increment constant
    double r2 = 0.0;
    int j_min = 0, j_max = 0; // dyadic window used
    bool constant_path = false;
    std::string norm_name;
};

// Streaming sup-increment collector: push states at a fixed spacing
// `snapshot_dt`; the accumulator tracks sup_t ||x(t + lag) - x(t)|| over the
// dyadic lags 1, 2, ..., 2^max_level (in snapshot units) with a bounded ring
// of past states.
class HolderAccumulator {
  public:
    using IncrementNorm = std::function<double(const Vec&, const Vec&)>;
    HolderAccumulator(int max_level, double snapshot_dt, IncrementNorm inc);

    void push(const Vec& state);
    long long pushes() const { return count_; }
    double sup_increment(int level) const;
    long long comparisons(int level) const;

    // Least-squares fit of log2 sup-increment against log2 lag over levels
    // [j_min, j_max] (>= 3 levels, each with at least one comparison). A zero
    // sup anywhere in the window flags the path as constant instead of
    // producing a number.
    HolderEstimate fit(int j_min, int j_max) const;

  private:
    int max_level_;
    double dt_;
    IncrementNorm inc_;
    std::vector<Vec> ring_;
    std::vector<double> sups_;
    std::vector<long long> counts_;
    long long count_ = 0;
};

// Fit over a stored trajectory at stride 1 in the given norm. Requires
// M >= 64. With subtract_free_part the deterministic propagation of u0 is
// removed before estimation (a fully deterministic path then flags as
// constant). The window is in dyadic step-lag levels; the two smallest
// levels sit below the scheme-noise floor and are excluded by default.
HolderEstimate holder_exponent(const Trajectory& traj, const NormSpec& norm, int j_min = 2,
                               int j_max = 6, bool subtract_free_part = false);

// Scalar-path variant (e.g. calibration oracles).
HolderEstimate holder_exponent_scalar(const std::vector<double>& path, double dt, int j_min = 2,
                                      int j_max = 6);

// min over the ACTIVE terms of {1 - theta_G, 1/2 - theta_B, 1/2 - theta_C};
// inactive slots impose nothing. Returns +infinity when none is active.
double regularity_cap(bool g_active, bool b_active, bool c_active, double theta_G, double theta_B,
                      double theta_C);

struct RegularityRequest {
    double alpha = 1.5;
    double theta_B = 0.0;
    double theta_C = 0.45;
    double theta_G = 0.5;
    double delta = 0.0;  // fractional order of the increment norm
    double p_norm = 2.0; // Lp of the increment norm
    double q = 0.0;      // report max_t ||u(t)||_{L^q} when > 0
    int paths = 16;
    uint64_t master_seed = 1;
    int snapshot_stride = 1; // power of two dividing 2^j_min
    int j_min = 2, j_max = 7;
    bool subtract_free_part = true;
};

struct RegularityBand {
    double cap = 0.0;
    double delta = 0.0;
    bool noise_binding = false; // cap attained by an active noise term
    double median_exponent = 0.0;
    std::vector<double> per_path; // indexed by path, NaN for constant paths
    bool constant_path = false;   // every path degenerated to a constant
    bool upper_pass = false;
    bool lower_pass = true;
    bool pass = false;
    double max_lq = 0.0;
    double q = 0.0;
    int j_min = 0, j_max = 0;
    std::string norm_name;
};

// Runs `paths` coupled paths of the system, strips the deterministic free
// part, estimates the per-path exponent in the (delta, p)-norm over the
// requested dyadic step window, and checks the median against the active-term
// cap: median <= cap - delta + 0.10 always, and median >= cap - delta - 0.15
// additionally when the binding constraint comes from a noise term (near-
// sharpness holds for stochastic convolutions, not for the boundary drift).
// Throws std::invalid_argument naming the violated hypothesis when the
// exponent configuration is out of range.
RegularityBand regularity_band_check(const SpdeSystem& sys, const SteppingLattice& lat,
                                     const RegularityRequest& req);

struct ConvergenceStudy {
    std::vector<int> level_M;
    std::vector<double> errors; // RMS weighted-L2 gap to the fine solution at T
    double rate = 0.0;          // fitted order in dt over levels with error > 0
    int fine_M = 0;
    int paths = 0;
};

// Strong self-convergence: each path is integrated on the fine lattice and on
// every coarser level with block-summed (coupled) increments from the same
// draws; errors are RMS over paths of the final-time weighted L2 gap.
// Requires >= 3 levels, >= 32 paths, and every level dividing fine_M.
ConvergenceStudy strong_convergence_study(const SpdeSystem& sys, double T,
                                          const std::vector<int>& level_M, int fine_M, int paths,
                                          uint64_t master_seed);

} // namespace bnspde
