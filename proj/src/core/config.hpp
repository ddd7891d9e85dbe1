#pragma once
// Experiment configuration: key/value text with nested sections, strict
// schema (unknown keys rejected), range validation with anchored rejection
// messages, canonical serialization, and a stable fingerprint.

#include <cstdint>
#include <string>
#include <vector>

namespace bnspde {

struct ExperimentConfig {
    // [grid]
    int dimension = 1;
    int n = 64;
    // [lattice]
    double T = 1.0;
    int M = 256;
    // [coefficients]
    std::string coeff_kind = "constant"; // constant|sin-space|affine-space|time-hoelder|time-step
    double coeff_a = 1.0;                // diffusion scale (constant kind)
    double coeff_a0 = 0.0;               // potential offset
    double coeff_mu = 0.75;              // time-regularity exponent (time-hoelder kind)
    double coeff_c0 = 1.0;               // affine-space parameters
    double coeff_c1 = 0.0;
    // [operator]
    double shift_w = 1.0;
    std::string boundary_condition = "conormal";
    // [exponents]
    double p = 2.0;
    double alpha = 1.2;
    double theta_B = 0.0;
    double theta_C = 0.45;
    double theta_G = 0.5;
    double a = 0.0; // time-regularity exponent of the noise coefficients (pinned to 0)
    double delta = 0.0;
    double q = 0.0; // 0 disables the embedding report
    // [noise.interior]
    std::string interior_kind = "none"; // none|spectral|white
    std::string interior_spectrum = "poly:1:2";
    int interior_modes = 8;
    double interior_r = 2.0;
    // [noise.boundary]
    std::string boundary_kind = "none"; // none|spectral
    std::string boundary_spectrum = "poly:1:2";
    int boundary_modes = 2;
    double boundary_s = 2.0;
    // [nonlinearity]
    std::string F = "zero";
    std::string G = "zero";
    std::string B = "zero";
    std::string C = "zero";
    // [initial]
    std::string u0 = "zero"; // zero | constant:<v> | cos-mode:<k> | random-smooth
    // [run]
    uint64_t master_seed = 1;
    int paths = 1;
    int workers = 1;
    // [output]
    std::string prefix = "run";
    int snapshot_stride = 1;
    // [estimator]
    int j_min = 2;
    int j_max = 6;
    double p_norm = 2.0;
    bool subtract_free_part = true;
    // [study]
    std::string levels = ""; // comma-separated step counts for convergence studies
    int fine_M = 0;          // 0: use lattice M as the fine level

    bool operator==(const ExperimentConfig&) const = default;
};

// Parsed spectrum selector: "poly:c:g" (lambda_j = c (j+1)^-g),
// "looppoly:c:g" (lambda_0 = c; boundary pair k carries c k^-g on both
// members), or "list:v1,v2,...".
struct SpectrumSpec {
    enum class Kind { Poly, LoopPoly, List } kind = Kind::Poly;
    double c = 1.0;
    double gamma = 2.0;
    std::vector<double> values;
};
SpectrumSpec parse_spectrum(const std::string& text); // throws std::invalid_argument

struct ParseOutcome {
    ExperimentConfig config; // meaningful only when violations is empty
    std::vector<std::string> violations;
};

// Structural pass only: sections, keys, and value shapes (unknown keys and
// malformed values are violations); range rules are validate_config's job.
ParseOutcome parse_config_structure(const std::string& text);

// Parses the sectioned key/value text and runs the full range validation.
// Structural problems (unknown keys, malformed values) and range violations
// are collected together; every violation message carries exactly one
// bracketed anchor naming the rule it enforces.
ParseOutcome parse_config_text(const std::string& text);

// Applies one "section.key" = value override with the parser's field rules.
// Returns false and fills *error when the key is unknown or the value is
// malformed; range rules are still validate_config's job afterwards.
bool apply_config_override(ExperimentConfig& cfg, const std::string& dotted_key,
                           const std::string& value, std::string* error);

// Range validation of an already-populated config (the parse path calls it).
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

// Convenience wrapper: throws std::invalid_argument with the newline-joined
// violation list when the text does not validate.
ExperimentConfig parse_and_validate(const std::string& text);

// Canonical serialization: every section and key, fixed order, numerics at 17
// significant digits. parse(serialize(cfg)) reproduces cfg exactly.
std::string serialize_config(const ExperimentConfig& cfg);

// FNV-1a (64-bit) over the canonical serialization, with the worker count
// normalized to 1 first: it steers execution, never results, so configs that
// differ only in workers name the same experiment.
uint64_t config_fingerprint(const ExperimentConfig& cfg);

} // namespace bnspde
