#include "core/experiment.hpp"

#include "core/variational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bnspde {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex_fingerprint(uint64_t fp) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LineFit f;
    const double den = m * sxx - sx * sx;
    f.slope = (m * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / m;
    return f;
}

std::string profile_name(TimeProfile p) {
    switch (p) {
    case TimeProfile::Constant: return "constant";
    case TimeProfile::Linear: return "linear";
    case TimeProfile::ExpDecay: return "exp-decay";
    }
    return "?";
}

// Writes `content` into out_dir/name and records the artifact name.
void emit(const std::string& out_dir, const std::string& name, const std::string& content,
          RunResult* result) {
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + path.string());
    os << content;
    if (!os) throw std::runtime_error("failed writing output file " + path.string());
    result->artifacts.push_back(name);
}

std::string stamp_line(uint64_t fingerprint, uint64_t seed) {
    return "# fingerprint=" + hex_fingerprint(fingerprint) +
           " master_seed=" + std::to_string(seed) + "\n";
}

} // namespace

RunMode parse_run_mode(const std::string& name) {
    if (name == "solve") return RunMode::Solve;
    if (name == "deterministic-oracle") return RunMode::DeterministicOracle;
    if (name == "variational-check") return RunMode::VariationalCheck;
    if (name == "regularity-study") return RunMode::RegularityStudy;
    if (name == "convergence-study") return RunMode::ConvergenceStudy;
    if (name == "validate-only") return RunMode::ValidateOnly;
    throw std::invalid_argument(
        "unknown mode \"" + name +
        "\" (solve, deterministic-oracle, variational-check, regularity-study, "
        "convergence-study, validate-only)");
}

std::string run_mode_name(RunMode mode) {
    switch (mode) {
    case RunMode::Solve: return "solve";
    case RunMode::DeterministicOracle: return "deterministic-oracle";
    case RunMode::VariationalCheck: return "variational-check";
    case RunMode::RegularityStudy: return "regularity-study";
    case RunMode::ConvergenceStudy: return "convergence-study";
    case RunMode::ValidateOnly: return "validate-only";
    }
    return "?";
}

Vec materialize_spectrum(const SpectrumSpec& spec, int modes) {
    if (modes < 1) throw std::invalid_argument("spectrum: modes must be >= 1");
    Vec out(modes);
    switch (spec.kind) {
    case SpectrumSpec::Kind::Poly:
        for (int j = 0; j < modes; ++j) out(j) = spec.c * std::pow(j + 1.0, -spec.gamma);
        break;
    case SpectrumSpec::Kind::LoopPoly:
        out(0) = spec.c;
        for (int j = 1; j < modes; ++j) {
            const int pair = (j + 1) / 2;
            out(j) = spec.c * std::pow(static_cast<double>(pair), -spec.gamma);
        }
        break;
    case SpectrumSpec::Kind::List:
        if (static_cast<int>(spec.values.size()) != modes)
            throw std::invalid_argument("spectrum: list carries " +
                                        std::to_string(spec.values.size()) +
                                        " entries but modes = " + std::to_string(modes));
        for (int j = 0; j < modes; ++j) out(j) = spec.values[j];
        break;
    }
    return out;
}

Vec build_initial_state(const ExperimentConfig& cfg, const Grid& g) {
    const std::string t = cfg.u0;
    const int size = g.num_interior();
    if (t == "zero") return Vec::Zero(size);
    if (t.rfind("constant:", 0) == 0) {
        const double v = std::strtod(t.c_str() + 9, nullptr);
        return Vec::Constant(size, v);
    }
    if (t.rfind("cos-mode:", 0) == 0) {
        const int k = std::atoi(t.c_str() + 9);
        Vec u(size);
        for (int i = 0; i < size; ++i) {
            const auto xy = g.interior_coord(i);
            double v = std::cos(k * kPi * xy[0]);
            if (g.dim == 2) v *= std::cos(k * kPi * xy[1]);
            u(i) = v;
        }
        return u;
    }
    if (t == "random-smooth") {
        // Seed-derived low-frequency cosine sum; the draws live on a path tag
        // no solution path uses, so they never collide with noise increments.
        constexpr uint64_t kInitialTag = ~0ull;
        Vec u = Vec::Zero(size);
        for (int j = 0; j <= 8; ++j) {
            const double xi = normal_draw(cfg.master_seed, kStreamAux, kInitialTag, 0,
                                          static_cast<uint64_t>(j));
            const double amp = xi / (1.0 + j * j);
            for (int i = 0; i < size; ++i) {
                const auto xy = g.interior_coord(i);
                double v = std::cos(j * kPi * xy[0]);
                if (g.dim == 2) v *= std::cos(j * kPi * xy[1]);
                u(i) += amp * v;
            }
        }
        return u;
    }
    throw std::invalid_argument("initial state \"" + t + "\" is not in the catalog");
}

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
    {
        const std::vector<std::string> violations = validate_config(cfg);
        if (!violations.empty()) throw std::invalid_argument(violations.front());
    }
    BuiltExperiment built;
    built.config = cfg;
    built.fingerprint = config_fingerprint(cfg);
    built.grid = make_grid(cfg.dimension, cfg.n);
    built.lattice = make_lattice(cfg.T, cfg.M);

    CoefficientField coeffs;
    if (cfg.coeff_kind == "constant") coeffs = constant_coeffs(cfg.coeff_a, cfg.coeff_a0);
    else if (cfg.coeff_kind == "sin-space") coeffs = sin_space_coeffs(cfg.coeff_a0);
    else if (cfg.coeff_kind == "affine-space")
        coeffs = affine_space_coeffs(cfg.coeff_c0, cfg.coeff_c1, cfg.coeff_a0);
    else if (cfg.coeff_kind == "time-hoelder") coeffs = time_hoelder_coeffs(cfg.coeff_mu, cfg.coeff_a0);
    else if (cfg.coeff_kind == "time-step") coeffs = time_step_coeffs(cfg.coeff_a0);
    else throw std::invalid_argument("coefficient kind \"" + cfg.coeff_kind + "\" is not in the catalog");

    built.family = std::make_unique<OperatorFamily>(built.grid, coeffs, cfg.shift_w);
    built.family->prepare(built.lattice.times(), built.lattice.dt());

    SpdeSystem sys;
    sys.family = built.family.get();
    sys.F = parse_nonlinearity(cfg.F);
    sys.G = parse_nonlinearity(cfg.G);
    sys.B = parse_nonlinearity(cfg.B);
    sys.C = parse_nonlinearity(cfg.C);

    if (!sys.G.is_zero() || !sys.C.is_zero()) {
        built.boundary = std::make_unique<BoundaryMap>(*built.family, cfg.alpha);
        sys.boundary = built.boundary.get();
    }

    if (cfg.interior_kind == "spectral")
        sys.interior_noise = interior_spectral_model(
            built.grid, materialize_spectrum(parse_spectrum(cfg.interior_spectrum), cfg.interior_modes),
            cfg.interior_r);
    else if (cfg.interior_kind == "white")
        sys.interior_noise = white_noise_model(built.grid, cfg.interior_r);
    else
        sys.interior_noise = null_noise(NoiseTarget::Interior);

    if (cfg.boundary_kind == "spectral")
        sys.boundary_noise = boundary_spectral_model(
            built.grid, materialize_spectrum(parse_spectrum(cfg.boundary_spectrum), cfg.boundary_modes),
            cfg.boundary_s);
    else
        sys.boundary_noise = null_noise(NoiseTarget::Boundary);

    sys.u0 = build_initial_state(cfg, built.grid);
    built.system = std::move(sys);
    validate_system(built.system);
    return built;
}

void for_each_path(int paths, int workers, const std::function<void(int)>& fn) {
    if (paths <= 0) return;
    workers = std::max(1, std::min(workers, paths));
    if (workers == 1) {
        for (int p = 0; p < paths; ++p) fn(p);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int p = next.fetch_add(1);
                if (p >= paths || failed.load()) return;
                try {
                    fn(p);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string ndjson_header(const BuiltExperiment& built, RunMode mode) {
    const ExperimentConfig& c = built.config;
    std::ostringstream os;
    os << "{\"kind\":\"header\",\"mode\":\"" << run_mode_name(mode) << "\",\"fingerprint\":\""
       << hex_fingerprint(built.fingerprint) << "\",\"master_seed\":" << c.master_seed
       << ",\"dimension\":" << c.dimension << ",\"n\":" << c.n << ",\"T\":" << fmt17(c.T)
       << ",\"M\":" << c.M << ",\"paths\":" << c.paths
       << ",\"snapshot_stride\":" << c.snapshot_stride << "}\n";
    return os.str();
}

std::string summary_preamble(const BuiltExperiment& built, RunMode mode) {
    const ExperimentConfig& c = built.config;
    std::ostringstream os;
    os << "mode = " << run_mode_name(mode) << "\n"
       << "fingerprint = " << hex_fingerprint(built.fingerprint) << "\n"
       << "master_seed = " << c.master_seed << "\n"
       << "grid = dimension " << c.dimension << ", n " << c.n << "\n"
       << "lattice = T " << fmt17(c.T) << ", M " << c.M << "\n";
    return os.str();
}

RunResult run_solve(const BuiltExperiment& built, const std::string& out_dir) {
    const ExperimentConfig& cfg = built.config;
    if (cfg.paths < 1)
        throw std::invalid_argument("solve: paths = 0 is empty work; request at least one path");

    const Grid& g = built.grid;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::string> records(cfg.paths);
    std::vector<double> final_l2(cfg.paths, 0.0);
    Vec final_state_path0;

    for_each_path(cfg.paths, cfg.workers, [&](int p) {
        IncrementStream stream;
        stream.master_seed = cfg.master_seed;
        stream.path_index = static_cast<uint64_t>(p);
        stream.fine_M = cfg.M;
        stream.T = cfg.T;
        std::ostringstream os;
        run_path_streaming(built.system, built.lattice, stream, cfg.snapshot_stride,
                           [&](int k, double t, const Vec& state) {
                               const double l2 = lp_norm(g, state, 2.0);
                               const double li = lp_norm(g, state, inf);
                               os << "{\"kind\":\"snapshot\",\"path\":" << p << ",\"step\":" << k
                                  << ",\"t\":" << fmt17(t) << ",\"l2\":" << fmt17(l2)
                                  << ",\"linf\":" << fmt17(li) << "}\n";
                               if (k == built.lattice.M) {
                                   final_l2[p] = l2;
                                   os << "{\"kind\":\"final\",\"path\":" << p
                                      << ",\"t\":" << fmt17(t) << ",\"l2\":" << fmt17(l2)
                                      << ",\"linf\":" << fmt17(li) << "}\n";
                                   if (p == 0) final_state_path0 = state;
                               }
                           });
        records[p] = os.str();
    });

    RunResult result;
    std::filesystem::create_directories(out_dir);

    std::string ndjson = ndjson_header(built, RunMode::Solve);
    for (const std::string& r : records) ndjson += r;
    emit(out_dir, cfg.prefix + "_records.ndjson", ndjson, &result);

    std::string csv = stamp_line(built.fingerprint, cfg.master_seed);
    csv += "index,x,y,value\n";
    for (int i = 0; i < g.num_interior(); ++i) {
        const auto xy = g.interior_coord(i);
        csv += std::to_string(i) + "," + fmt17(xy[0]) + "," + fmt17(xy[1]) + "," +
               fmt17(final_state_path0(i)) + "\n";
    }
    emit(out_dir, cfg.prefix + "_final_state.csv", csv, &result);

    std::vector<double> sorted = final_l2;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    double mean = 0.0;
    for (double v : final_l2) mean += v;
    mean /= final_l2.size();

    std::string summary = summary_preamble(built, RunMode::Solve);
    summary += "paths = " + std::to_string(cfg.paths) + "\n";
    summary += "final_l2_mean = " + fmt17(mean) + "\n";
    summary += "final_l2_median = " + fmt17(median) + "\n";
    summary += "status = ok\n";
    emit(out_dir, cfg.prefix + "_summary.txt", summary, &result);
    result.summary = summary;
    return result;
}

RunResult run_deterministic_oracle(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.dimension != 1)
        throw std::invalid_argument("deterministic-oracle: the analytic benchmark runs on the "
                                    "interval (set dimension = 1)");
    if (cfg.coeff_kind != "constant")
        throw std::invalid_argument("deterministic-oracle: the analytic benchmark needs constant "
                                    "coefficients");

    const double a = cfg.coeff_a;
    const double a0 = cfg.coeff_a0;
    const double decay = -a * kPi * kPi + a0;

    struct Row {
        std::string kind;
        int n;
        int M;
        double T;
        double error;
    };
    std::vector<Row> rows;

    const auto run_case = [&](int n, int M, double T) {
        const Grid g = make_grid(1, n);
        const SteppingLattice lat = make_lattice(T, M);
        OperatorFamily fam(g, constant_coeffs(a, a0), cfg.shift_w);
        fam.prepare(lat.times(), lat.dt());
        Vec u0(g.num_interior());
        for (int i = 0; i < g.num_interior(); ++i)
            u0(i) = std::cos(kPi * g.interior_coord(i)[0]);
        const Vec uT = propagate(fam, lat, 0, lat.M, u0);
        Vec exact(g.num_interior());
        const double amp = std::exp(decay * T);
        for (int i = 0; i < g.num_interior(); ++i)
            exact(i) = amp * std::cos(kPi * g.interior_coord(i)[0]);
        return lp_norm(g, uT - exact, 2.0);
    };

    // Spatial sweep: a short horizon keeps the time-stepping error far below
    // the O(h^2) spatial error being measured.
    std::vector<double> log_h, log_se;
    for (int n : {64, 128, 256}) {
        const double err = run_case(n, 4096, 5e-4);
        rows.push_back({"spatial", n, 4096, 5e-4, err});
        log_h.push_back(std::log2(1.0 / n));
        log_se.push_back(std::log2(err));
    }
    const double spatial_order = fit_line(log_h, log_se).slope;

    // Temporal sweep: a fine grid freezes the spatial error; halving dt
    // exposes the first-order drift-implicit stepping error.
    std::vector<double> log_dt, log_te;
    for (int M : {256, 512, 1024}) {
        const double err = run_case(512, M, 0.1);
        rows.push_back({"temporal", 512, M, 0.1, err});
        log_dt.push_back(std::log2(0.1 / M));
        log_te.push_back(std::log2(err));
    }
    const double temporal_order = fit_line(log_dt, log_te).slope;

    const bool pass = spatial_order >= 1.9 && temporal_order >= 0.9;

    RunResult result;
    result.exit_code = pass ? 0 : 1;
    std::filesystem::create_directories(out_dir);

    const uint64_t fp = config_fingerprint(cfg);
    std::string csv = stamp_line(fp, cfg.master_seed);
    csv += "kind,n,M,T,error\n";
    for (const Row& r : rows)
        csv += r.kind + "," + std::to_string(r.n) + "," + std::to_string(r.M) + "," + fmt17(r.T) +
               "," + fmt17(r.error) + "\n";
    emit(out_dir, cfg.prefix + "_heat_oracle.csv", csv, &result);

    std::string summary;
    summary += "mode = deterministic-oracle\n";
    summary += "fingerprint = " + hex_fingerprint(fp) + "\n";
    summary += "master_seed = " + std::to_string(cfg.master_seed) + "\n";
    summary += "spatial_order = " + fmt17(spatial_order) + " (floor 1.9)\n";
    summary += "temporal_order = " + fmt17(temporal_order) + " (floor 0.9)\n";
    summary += std::string("status = ") + (pass ? "ok" : "order floors missed") + "\n";
    emit(out_dir, cfg.prefix + "_summary.txt", summary, &result);
    result.summary = summary;
    return result;
}

RunResult run_variational_check(const BuiltExperiment& built, const std::string& out_dir) {
    const ExperimentConfig& cfg = built.config;
    const long long footprint =
        static_cast<long long>(built.lattice.M + 1) * built.grid.num_interior();
    if (footprint > 8'000'000)
        throw std::invalid_argument("variational-check: storing the full trajectory needs "
                                    "(M+1) * nodes <= 8e6; shrink the lattice or the grid");

    IncrementStream stream;
    stream.master_seed = cfg.master_seed;
    stream.path_index = 0;
    stream.fine_M = cfg.M;
    stream.T = cfg.T;
    const Trajectory traj = run_path(built.system, built.lattice, stream, built.fingerprint);

    const std::vector<TestFunction> catalog = {
        constant_profile_test_function(built.grid, 0),
        linear_profile_test_function(built.grid, 1, 1.0, -0.5),
        exp_profile_test_function(built.grid, 1),
    };

    RunResult result;
    std::filesystem::create_directories(out_dir);
    std::string csv = stamp_line(built.fingerprint, cfg.master_seed);
    csv += "id,profile,pairing,residual\n";
    double max_residual = 0.0;
    for (const TestFunction& phi : catalog) {
        for (BoundaryPairing pairing : {BoundaryPairing::Lambda, BoundaryPairing::Trace}) {
            const double r = variational_residual(built.system, traj, phi, stream, pairing);
            max_residual = std::max(max_residual, r);
            csv += phi.id + "," + profile_name(phi.profile) + "," +
                   (pairing == BoundaryPairing::Lambda ? "lambda" : "trace") + "," + fmt17(r) +
                   "\n";
        }
    }
    emit(out_dir, cfg.prefix + "_variational.csv", csv, &result);

    std::string summary = summary_preamble(built, RunMode::VariationalCheck);
    summary += "test_functions = " + std::to_string(catalog.size()) + "\n";
    summary += "max_residual = " + fmt17(max_residual) + "\n";
    summary += "status = ok\n";
    emit(out_dir, cfg.prefix + "_summary.txt", summary, &result);
    result.summary = summary;
    return result;
}

RunResult run_regularity_study(const BuiltExperiment& built, const std::string& out_dir) {
    const ExperimentConfig& cfg = built.config;
    RegularityRequest req;
    req.alpha = cfg.alpha;
    req.theta_B = cfg.theta_B;
    req.theta_C = cfg.theta_C;
    req.theta_G = cfg.theta_G;
    req.delta = cfg.delta;
    req.p_norm = cfg.p_norm;
    req.q = cfg.q;
    req.paths = cfg.paths;
    req.master_seed = cfg.master_seed;
    req.snapshot_stride = cfg.snapshot_stride;
    req.j_min = cfg.j_min;
    req.j_max = cfg.j_max;
    req.subtract_free_part = cfg.subtract_free_part;

    const RegularityBand band = regularity_band_check(built.system, built.lattice, req);

    RunResult result;
    std::filesystem::create_directories(out_dir);

    std::string ndjson = ndjson_header(built, RunMode::RegularityStudy);
    for (size_t i = 0; i < band.per_path.size(); ++i)
        ndjson += "{\"kind\":\"path\",\"path\":" + std::to_string(i) +
                  ",\"exponent\":" + fmt17(band.per_path[i]) + "}\n";
    ndjson += "{\"kind\":\"band\",\"cap\":" + fmt17(band.cap) + ",\"delta\":" + fmt17(band.delta) +
              ",\"median\":" + fmt17(band.median_exponent) +
              ",\"noise_binding\":" + (band.noise_binding ? "true" : "false") +
              ",\"constant_path\":" + (band.constant_path ? "true" : "false") +
              ",\"upper_pass\":" + (band.upper_pass ? "true" : "false") +
              ",\"lower_pass\":" + (band.lower_pass ? "true" : "false") +
              ",\"pass\":" + (band.pass ? "true" : "false") + ",\"max_lq\":" + fmt17(band.max_lq) +
              ",\"q\":" + fmt17(band.q) + ",\"j_min\":" + std::to_string(band.j_min) +
              ",\"j_max\":" + std::to_string(band.j_max) + ",\"norm\":\"" + band.norm_name +
              "\"}\n";
    emit(out_dir, cfg.prefix + "_regularity.ndjson", ndjson, &result);

    std::string summary = summary_preamble(built, RunMode::RegularityStudy);
    summary += "norm = " + band.norm_name + "\n";
    summary += "window = [" + std::to_string(band.j_min) + ", " + std::to_string(band.j_max) + "]\n";
    summary += "cap = " + fmt17(band.cap) + "\n";
    summary += "delta = " + fmt17(band.delta) + "\n";
    summary += "median_exponent = " + fmt17(band.median_exponent) + "\n";
    summary += std::string("noise_binding = ") + (band.noise_binding ? "true" : "false") + "\n";
    summary += std::string("band_pass = ") + (band.pass ? "true" : "false") + "\n";
    if (band.q > 0.0) summary += "max_lq = " + fmt17(band.max_lq) + "\n";
    summary += "status = ok\n";
    emit(out_dir, cfg.prefix + "_summary.txt", summary, &result);
    result.summary = summary;
    return result;
}

RunResult run_convergence_study(const BuiltExperiment& built, const std::string& out_dir) {
    const ExperimentConfig& cfg = built.config;
    std::vector<int> levels;
    {
        std::istringstream is(cfg.levels);
        std::string piece;
        while (std::getline(is, piece, ',')) {
            if (!piece.empty()) levels.push_back(std::atoi(piece.c_str()));
        }
    }
    if (levels.empty())
        throw std::invalid_argument(
            "convergence-study: set study.levels to the coarse step counts (e.g. 32,64,128)");
    const int fine_M = cfg.fine_M > 0 ? cfg.fine_M : cfg.M;

    const ConvergenceStudy study =
        strong_convergence_study(built.system, cfg.T, levels, fine_M, cfg.paths, cfg.master_seed);

    RunResult result;
    std::filesystem::create_directories(out_dir);

    std::string csv = stamp_line(built.fingerprint, cfg.master_seed);
    csv += "level_M,dt,error\n";
    for (size_t i = 0; i < study.level_M.size(); ++i)
        csv += std::to_string(study.level_M[i]) + "," + fmt17(cfg.T / study.level_M[i]) + "," +
               fmt17(study.errors[i]) + "\n";
    emit(out_dir, cfg.prefix + "_convergence.csv", csv, &result);

    std::string summary = summary_preamble(built, RunMode::ConvergenceStudy);
    summary += "fine_M = " + std::to_string(study.fine_M) + "\n";
    summary += "paths = " + std::to_string(study.paths) + "\n";
    summary += "rate = " + fmt17(study.rate) + "\n";
    summary += "status = ok\n";
    emit(out_dir, cfg.prefix + "_summary.txt", summary, &result);
    result.summary = summary;
    return result;
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg, RunMode mode, const std::string& out_dir) {
    if (mode == RunMode::ValidateOnly) {
        const std::vector<std::string> violations = validate_config(cfg);
        if (!violations.empty()) throw std::invalid_argument(violations.front());
        RunResult result;
        result.summary = "mode = validate-only\nfingerprint = " +
                         hex_fingerprint(config_fingerprint(cfg)) +
                         "\nmaster_seed = " + std::to_string(cfg.master_seed) +
                         "\nstatus = ok\n";
        return result;
    }
    if (mode == RunMode::DeterministicOracle) {
        const std::vector<std::string> violations = validate_config(cfg);
        if (!violations.empty()) throw std::invalid_argument(violations.front());
        return run_deterministic_oracle(cfg, out_dir);
    }
    const BuiltExperiment built = build_experiment(cfg);
    switch (mode) {
    case RunMode::Solve: return run_solve(built, out_dir);
    case RunMode::VariationalCheck: return run_variational_check(built, out_dir);
    case RunMode::RegularityStudy: return run_regularity_study(built, out_dir);
    case RunMode::ConvergenceStudy: return run_convergence_study(built, out_dir);
    default: break;
    }
    throw std::logic_error("run_experiment: unhandled mode");
}

} // namespace bnspde
