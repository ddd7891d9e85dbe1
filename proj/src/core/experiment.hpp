#pragma once
// Experiment orchestration: materializes a validated configuration into
// runtime objects, executes one of six run modes, and writes artifacts
// (NDJSON records, CSV tables, plain-text summaries). Every artifact embeds
// the config fingerprint and the master seed. Path work fans out over a
// bounded worker pool and is aggregated strictly in path-index order, so
// outputs are byte-identical for any worker count.

#include "core/config.hpp"
#include "core/diagnostics.hpp"
#include "core/mild_solver.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bnspde {

enum class RunMode {
    Solve,
    DeterministicOracle,
    VariationalCheck,
    RegularityStudy,
    ConvergenceStudy,
    ValidateOnly,
};

// Accepts the kebab-case mode names used on the command line; throws
// std::invalid_argument for anything else.
RunMode parse_run_mode(const std::string& name);
std::string run_mode_name(RunMode mode);

// Owning bundle of the runtime objects a run needs. `system` points at the
// owned family/boundary members, so the bundle is movable but not copyable.
struct BuiltExperiment {
    ExperimentConfig config;
    Grid grid;
    SteppingLattice lattice;
    std::unique_ptr<OperatorFamily> family;
    std::unique_ptr<BoundaryMap> boundary; // present iff a boundary slot is active
    SpdeSystem system;
    uint64_t fingerprint = 0;
};

// Realizes grid, lattice, operator family (prepared over the lattice),
// boundary map, noise models, nonlinearities, and the initial state.
// Throws std::invalid_argument when a validated config cannot be realized
// at this resolution (e.g. more spectral modes than the grid carries).
BuiltExperiment build_experiment(const ExperimentConfig& cfg);

// Materializes a spectrum selector into `modes` per-mode variances.
Vec materialize_spectrum(const SpectrumSpec& spec, int modes);

// Initial-state catalog: zero, constant:<v>, cos-mode:<k>, random-smooth
// (low-frequency cosine sum with seed-derived coefficients).
Vec build_initial_state(const ExperimentConfig& cfg, const Grid& g);

// Runs fn(path) for path = 0 .. paths-1 on min(workers, paths) threads.
// The first exception wins and is rethrown after all workers stop.
void for_each_path(int paths, int workers, const std::function<void(int)>& fn);

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> artifacts; // file names written inside out_dir
    std::string summary;                // contents of the plain-text summary
};

// Executes the requested mode and writes its artifacts into out_dir
// (created if missing). validate-only writes nothing. deterministic-oracle
// returns exit 1 when the fitted orders miss their floors; module errors
// throw with context.
RunResult run_experiment(const ExperimentConfig& cfg, RunMode mode, const std::string& out_dir);

} // namespace bnspde
