#include "core/config.hpp"

#include "core/nonlinearity.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bnspde {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Every violation message carries exactly one bracketed rule tag:
//   [Theorem 4.4]  solvability exponent ranges,
//   [Remark 4.5]   boundary-condition restriction,
//   [Example 4.5]  trace-class spectral covariance,
//   [Example 4.8]  white-noise admissibility,
//   [Eq. (SE)]     structural shape of the problem instance.
const std::string kStructural = "[Eq. (SE)]";

bool parse_double_value(const std::string& text, double* out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) return false;
    if (!std::isfinite(v)) return false;
    *out = v;
    return true;
}

bool parse_int_value(const std::string& text, long long* out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) return false;
    *out = v;
    return true;
}

bool parse_uint_value(const std::string& text, unsigned long long* out) {
    const std::string t = trim(text);
    if (t.empty() || t[0] == '-') return false;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) return false;
    *out = v;
    return true;
}

struct FieldCursor {
    ExperimentConfig* cfg;
    std::vector<std::string>* violations;

    void bad_value(const std::string& fq, const std::string& value, const char* want) {
        violations->push_back("config: value \"" + value + "\" for " + fq + " is not " + want +
                              " " + kStructural);
    }
    void set_d(double* slot, const std::string& fq, const std::string& value) {
        double v;
        if (parse_double_value(value, &v)) *slot = v;
        else bad_value(fq, value, "a finite number");
    }
    void set_i(int* slot, const std::string& fq, const std::string& value) {
        long long v;
        if (parse_int_value(value, &v) && v >= -(1LL << 31) && v < (1LL << 31)) *slot = static_cast<int>(v);
        else bad_value(fq, value, "an integer");
    }
    void set_u64(uint64_t* slot, const std::string& fq, const std::string& value) {
        unsigned long long v;
        if (parse_uint_value(value, &v)) *slot = v;
        else bad_value(fq, value, "an unsigned integer");
    }
    void set_s(std::string* slot, const std::string&, const std::string& value) { *slot = trim(value); }
    void set_b(bool* slot, const std::string& fq, const std::string& value) {
        const std::string t = trim(value);
        if (t == "true" || t == "1") *slot = true;
        else if (t == "false" || t == "0") *slot = false;
        else bad_value(fq, value, "a boolean (true/false)");
    }
};

// Returns false when the section/key pair is not in the schema.
bool set_field(FieldCursor& fc, const std::string& sec, const std::string& key,
               const std::string& value) {
    ExperimentConfig& c = *fc.cfg;
    const std::string fq = sec + "." + key;
    if (sec == "grid") {
        if (key == "dimension") fc.set_i(&c.dimension, fq, value);
        else if (key == "n") fc.set_i(&c.n, fq, value);
        else return false;
    } else if (sec == "lattice") {
        if (key == "T") fc.set_d(&c.T, fq, value);
        else if (key == "M") fc.set_i(&c.M, fq, value);
        else return false;
    } else if (sec == "coefficients") {
        if (key == "kind") fc.set_s(&c.coeff_kind, fq, value);
        else if (key == "a") fc.set_d(&c.coeff_a, fq, value);
        else if (key == "a0") fc.set_d(&c.coeff_a0, fq, value);
        else if (key == "mu") fc.set_d(&c.coeff_mu, fq, value);
        else if (key == "c0") fc.set_d(&c.coeff_c0, fq, value);
        else if (key == "c1") fc.set_d(&c.coeff_c1, fq, value);
        else return false;
    } else if (sec == "operator") {
        if (key == "shift_w") fc.set_d(&c.shift_w, fq, value);
        else if (key == "boundary_condition") fc.set_s(&c.boundary_condition, fq, value);
        else return false;
    } else if (sec == "exponents") {
        if (key == "p") fc.set_d(&c.p, fq, value);
        else if (key == "alpha") fc.set_d(&c.alpha, fq, value);
        else if (key == "theta_B") fc.set_d(&c.theta_B, fq, value);
        else if (key == "theta_C") fc.set_d(&c.theta_C, fq, value);
        else if (key == "theta_G") fc.set_d(&c.theta_G, fq, value);
        else if (key == "a") fc.set_d(&c.a, fq, value);
        else if (key == "delta") fc.set_d(&c.delta, fq, value);
        else if (key == "q") fc.set_d(&c.q, fq, value);
        else return false;
    } else if (sec == "noise.interior") {
        if (key == "kind") fc.set_s(&c.interior_kind, fq, value);
        else if (key == "spectrum") fc.set_s(&c.interior_spectrum, fq, value);
        else if (key == "modes") fc.set_i(&c.interior_modes, fq, value);
        else if (key == "r") fc.set_d(&c.interior_r, fq, value);
        else return false;
    } else if (sec == "noise.boundary") {
        if (key == "kind") fc.set_s(&c.boundary_kind, fq, value);
        else if (key == "spectrum") fc.set_s(&c.boundary_spectrum, fq, value);
        else if (key == "modes") fc.set_i(&c.boundary_modes, fq, value);
        else if (key == "s") fc.set_d(&c.boundary_s, fq, value);
        else return false;
    } else if (sec == "nonlinearity") {
        if (key == "F") fc.set_s(&c.F, fq, value);
        else if (key == "G") fc.set_s(&c.G, fq, value);
        else if (key == "B") fc.set_s(&c.B, fq, value);
        else if (key == "C") fc.set_s(&c.C, fq, value);
        else return false;
    } else if (sec == "initial") {
        if (key == "u0") fc.set_s(&c.u0, fq, value);
        else return false;
    } else if (sec == "run") {
        if (key == "master_seed") fc.set_u64(&c.master_seed, fq, value);
        else if (key == "paths") fc.set_i(&c.paths, fq, value);
        else if (key == "workers") fc.set_i(&c.workers, fq, value);
        else return false;
    } else if (sec == "output") {
        if (key == "prefix") fc.set_s(&c.prefix, fq, value);
        else if (key == "snapshot_stride") fc.set_i(&c.snapshot_stride, fq, value);
        else return false;
    } else if (sec == "estimator") {
        if (key == "j_min") fc.set_i(&c.j_min, fq, value);
        else if (key == "j_max") fc.set_i(&c.j_max, fq, value);
        else if (key == "p_norm") fc.set_d(&c.p_norm, fq, value);
        else if (key == "subtract_free_part") fc.set_b(&c.subtract_free_part, fq, value);
        else return false;
    } else if (sec == "study") {
        if (key == "levels") fc.set_s(&c.levels, fq, value);
        else if (key == "fine_M") fc.set_i(&c.fine_M, fq, value);
        else return false;
    } else {
        return false;
    }
    return true;
}

const std::set<std::string> kSections = {
    "grid", "lattice", "coefficients", "operator", "exponents", "noise.interior",
    "noise.boundary", "nonlinearity", "initial", "run", "output", "estimator", "study"};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

bool parse_levels(const std::string& text, std::vector<int>* out) {
    out->clear();
    const std::string t = trim(text);
    if (t.empty()) return true;
    for (const std::string& piece : split(t, ',')) {
        long long v;
        if (!parse_int_value(piece, &v) || v < 1 || v > (1LL << 30)) return false;
        out->push_back(static_cast<int>(v));
    }
    return true;
}

bool valid_prefix(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s) {
        const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '_' ||
                        ch == '-';
        if (!ok) return false;
    }
    return true;
}

} // namespace

SpectrumSpec parse_spectrum(const std::string& text) {
    SpectrumSpec spec;
    const std::string t = trim(text);
    const size_t colon = t.find(':');
    const std::string head = colon == std::string::npos ? t : t.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : t.substr(colon + 1);
    if (head == "poly" || head == "looppoly") {
        spec.kind = head == "poly" ? SpectrumSpec::Kind::Poly : SpectrumSpec::Kind::LoopPoly;
        const std::vector<std::string> parts = split(rest, ':');
        if (parts.size() != 2) throw std::invalid_argument("spectrum: " + head + " needs c and gamma");
        if (!parse_double_value(parts[0], &spec.c) || !parse_double_value(parts[1], &spec.gamma))
            throw std::invalid_argument("spectrum: " + head + " parameters must be finite numbers");
        return spec;
    }
    if (head == "list") {
        spec.kind = SpectrumSpec::Kind::List;
        if (trim(rest).empty()) throw std::invalid_argument("spectrum: list needs at least one value");
        for (const std::string& piece : split(rest, ',')) {
            double v;
            if (!parse_double_value(piece, &v))
                throw std::invalid_argument("spectrum: list entries must be finite numbers");
            spec.values.push_back(v);
        }
        return spec;
    }
    throw std::invalid_argument("spectrum: unknown form \"" + head + "\" (poly, looppoly, list)");
}

ParseOutcome parse_config_structure(const std::string& text) {
    ParseOutcome out;
    FieldCursor fc{&out.config, &out.violations};
    std::set<std::string> seen;
    std::string section;
    bool section_known = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                out.violations.push_back("config: malformed section header at line " +
                                         std::to_string(line_no) + " " + kStructural);
                section.clear();
                section_known = false;
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            section_known = kSections.count(section) > 0;
            if (!section_known)
                out.violations.push_back("config: unknown section \"" + section + "\" " +
                                         kStructural);
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            out.violations.push_back("config: line " + std::to_string(line_no) +
                                     " is not a key = value pair " + kStructural);
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = line.substr(eq + 1);
        if (section.empty()) {
            out.violations.push_back("config: key \"" + key + "\" appears before any section " +
                                     kStructural);
            continue;
        }
        if (!section_known) continue; // already reported the section once
        if (key.empty()) {
            out.violations.push_back("config: empty key at line " + std::to_string(line_no) + " " +
                                     kStructural);
            continue;
        }
        const std::string fq = section + "." + key;
        if (!seen.insert(fq).second) {
            out.violations.push_back("config: duplicate key " + fq + " " + kStructural);
            continue;
        }
        if (!set_field(fc, section, key, value))
            out.violations.push_back("config: unknown key \"" + key + "\" in section " + section +
                                     " " + kStructural);
    }
    return out;
}

ParseOutcome parse_config_text(const std::string& text) {
    ParseOutcome out = parse_config_structure(text);
    const std::vector<std::string> range = validate_config(out.config);
    out.violations.insert(out.violations.end(), range.begin(), range.end());
    return out;
}

bool apply_config_override(ExperimentConfig& cfg, const std::string& dotted_key,
                           const std::string& value, std::string* error) {
    const size_t dot = dotted_key.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= dotted_key.size()) {
        if (error) *error = "override key \"" + dotted_key + "\" must look like section.key";
        return false;
    }
    const std::string section = dotted_key.substr(0, dot);
    const std::string key = dotted_key.substr(dot + 1);
    if (!kSections.count(section)) {
        if (error) *error = "unknown section \"" + section + "\"";
        return false;
    }
    std::vector<std::string> violations;
    FieldCursor fc{&cfg, &violations};
    if (!set_field(fc, section, key, value)) {
        if (error) *error = "unknown key \"" + key + "\" in section " + section;
        return false;
    }
    if (!violations.empty()) {
        if (error) *error = violations.front();
        return false;
    }
    return true;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
    std::vector<std::string> v;
    const auto add = [&v](const std::string& msg) { v.push_back(msg); };

    // --- structural shape of the problem instance ---
    if (c.dimension != 1 && c.dimension != 2)
        add("grid: dimension = " + std::to_string(c.dimension) + " must be 1 or 2 " + kStructural);
    if (c.n < 4) add("grid: n = " + std::to_string(c.n) + " must be >= 4 " + kStructural);
    if (!(c.T > 0.0)) add("lattice: T = " + fmt_double(c.T) + " must be > 0 " + kStructural);
    if (c.M < 2) add("lattice: M = " + std::to_string(c.M) + " must be >= 2 " + kStructural);

    const std::set<std::string> coeff_kinds = {"constant", "sin-space", "affine-space",
                                               "time-hoelder", "time-step"};
    if (!coeff_kinds.count(c.coeff_kind)) {
        add("coefficients: kind = \"" + c.coeff_kind + "\" is not in the catalog " + kStructural);
    } else {
        if (c.coeff_kind == "constant" && !(c.coeff_a > 0.0))
            add("coefficients: a = " + fmt_double(c.coeff_a) + " must be > 0 for ellipticity " +
                kStructural);
        if (c.coeff_kind == "affine-space" &&
            !(c.coeff_c0 > 0.0 && c.coeff_c0 + c.coeff_c1 > 0.0))
            add("coefficients: affine-space needs min(c0, c0 + c1) > 0 for ellipticity " +
                kStructural);
        if (c.coeff_kind == "time-hoelder" && !(c.coeff_mu > 0.0 && c.coeff_mu <= 1.0))
            add("coefficients: mu = " + fmt_double(c.coeff_mu) + " outside (0, 1] " + kStructural);
    }
    if (!(c.shift_w >= 0.0))
        add("operator: shift_w = " + fmt_double(c.shift_w) + " must be >= 0 " + kStructural);
    if (c.boundary_condition == "dirichlet")
        add("operator: one cannot use Dirichlet boundary conditions with this method; the "
            "boundary pairing requires the conormal trace [Remark 4.5]");
    else if (c.boundary_condition != "conormal")
        add("operator: boundary_condition = \"" + c.boundary_condition +
            "\" is not recognised (use conormal) " + kStructural);

    // --- solvability exponent ranges ---
    if (!(c.p >= 2.0) || !std::isfinite(c.p))
        add("exponents: p = " + fmt_double(c.p) + " outside [2, infinity) [Theorem 4.4]");
    else if (!(c.alpha > 1.0 && c.alpha < 1.0 + 1.0 / c.p))
        add("exponents: alpha = " + fmt_double(c.alpha) + " outside (1, 1 + 1/p) = (1, " +
            fmt_double(1.0 + 1.0 / c.p) + ") [Theorem 4.4]");
    if (!(c.theta_B >= 0.0 && c.theta_B < 0.5))
        add("exponents: theta_B = " + fmt_double(c.theta_B) + " outside [0, 1/2) [Theorem 4.4]");
    const double lo = 1.0 - c.alpha / 2.0;
    if (c.alpha > 1.0 && c.alpha < 2.0) {
        if (!(c.theta_C > lo && c.theta_C < 0.5))
            add("exponents: theta_C = " + fmt_double(c.theta_C) + " outside (1 - alpha/2, 1/2) = (" +
                fmt_double(lo) + ", 0.5) [Theorem 4.4]");
        if (!(c.theta_G > lo && c.theta_G < 1.0))
            add("exponents: theta_G = " + fmt_double(c.theta_G) + " outside (1 - alpha/2, 1) = (" +
                fmt_double(lo) + ", 1) [Theorem 4.4]");
    }
    if (c.a != 0.0)
        add("exponents: a = " + fmt_double(c.a) +
            " must equal 0 (time-independent noise coefficients) [Theorem 4.4]");
    if (!(c.delta >= 0.0 && c.delta <= 1.0))
        add("exponents: delta = " + fmt_double(c.delta) + " outside [0, 1] [Theorem 4.4]");
    if (c.q != 0.0) {
        if (!(c.q >= 1.0))
            add("exponents: q = " + fmt_double(c.q) + " must be 0 (disabled) or >= 1 [Theorem 4.4]");
        else if (c.dimension == 2 && c.p >= 2.0 && !(c.q < c.dimension * c.p / (c.dimension - 1.0)))
            add("exponents: q = " + fmt_double(c.q) + " breaks the trace embedding q < d p/(d-1) = " +
                fmt_double(c.dimension * c.p / (c.dimension - 1.0)) + " [Theorem 4.4]");
    }

    // --- noise models ---
    const auto check_spectrum = [&](const std::string& label, const std::string& text) {
        try {
            const SpectrumSpec s = parse_spectrum(text);
            if (s.kind == SpectrumSpec::Kind::List) {
                for (double val : s.values)
                    if (!(val >= 0.0)) {
                        add(label + ": spectrum entries must be >= 0 (trace-class covariance) "
                                    "[Example 4.5]");
                        return;
                    }
            } else if (!(s.c >= 0.0)) {
                add(label + ": spectrum scale must be >= 0 (trace-class covariance) [Example 4.5]");
            }
        } catch (const std::invalid_argument& e) {
            add(label + ": " + e.what() + " " + kStructural);
        }
    };
    if (c.interior_kind == "spectral") {
        check_spectrum("noise.interior", c.interior_spectrum);
        if (c.interior_modes < 1)
            add("noise.interior: modes = " + std::to_string(c.interior_modes) + " must be >= 1 " +
                kStructural);
    } else if (c.interior_kind == "white") {
        if (c.dimension != 1 || !(c.p > 2.0))
            add("noise.interior: white noise is limited to interior noise in dimension one with "
                "p > 2 [Example 4.8]");
    } else if (c.interior_kind != "none") {
        add("noise.interior: kind = \"" + c.interior_kind + "\" is not recognised " + kStructural);
    }
    if (!(c.interior_r > 0.0))
        add("noise.interior: r = " + fmt_double(c.interior_r) + " must be > 0 " + kStructural);
    if (c.boundary_kind == "spectral") {
        check_spectrum("noise.boundary", c.boundary_spectrum);
        if (c.boundary_modes < 1)
            add("noise.boundary: modes = " + std::to_string(c.boundary_modes) + " must be >= 1 " +
                kStructural);
    } else if (c.boundary_kind == "white") {
        add("noise.boundary: white noise is limited to interior noise in dimension one with p > 2 "
            "[Example 4.8]");
    } else if (c.boundary_kind != "none") {
        add("noise.boundary: kind = \"" + c.boundary_kind + "\" is not recognised " + kStructural);
    }
    if (!(c.boundary_s > 0.0))
        add("noise.boundary: s = " + fmt_double(c.boundary_s) + " must be > 0 " + kStructural);

    // --- nonlinearity catalog ---
    const std::pair<const char*, const std::string*> slots[] = {
        {"F", &c.F}, {"G", &c.G}, {"B", &c.B}, {"C", &c.C}};
    for (const auto& [slot, text] : slots) {
        try {
            (void)parse_nonlinearity(*text);
        } catch (const std::exception&) {
            add(std::string("nonlinearity: ") + slot + " = \"" + *text +
                "\" is not in the catalog " + kStructural);
        }
    }

    // --- initial state catalog ---
    {
        const std::string t = trim(c.u0);
        bool ok = false;
        if (t == "zero" || t == "random-smooth") {
            ok = true;
        } else if (t.rfind("constant:", 0) == 0) {
            double val;
            ok = parse_double_value(t.substr(9), &val);
        } else if (t.rfind("cos-mode:", 0) == 0) {
            long long k;
            ok = parse_int_value(t.substr(9), &k) && k >= 0;
        }
        if (!ok)
            add("initial: u0 = \"" + c.u0 +
                "\" is not in the catalog (zero, constant:<v>, cos-mode:<k>, random-smooth) " +
                kStructural);
    }

    // --- run / output / estimator / study bookkeeping ---
    if (c.paths < 0)
        add("run: paths = " + std::to_string(c.paths) + " must be >= 0 " + kStructural);
    if (c.workers < 1)
        add("run: workers = " + std::to_string(c.workers) + " must be >= 1 " + kStructural);
    if (!valid_prefix(c.prefix))
        add("output: prefix must be a non-empty name over [A-Za-z0-9._-] " + kStructural);
    if (c.snapshot_stride < 1)
        add("output: snapshot_stride = " + std::to_string(c.snapshot_stride) + " must be >= 1 " +
            kStructural);
    if (c.j_min < 0)
        add("estimator: j_min = " + std::to_string(c.j_min) + " must be >= 0 " + kStructural);
    if (c.j_max < c.j_min + 2)
        add("estimator: the fit window needs at least 3 dyadic levels (j_max >= j_min + 2) " +
            kStructural);
    if (!(c.p_norm >= 1.0))
        add("estimator: p_norm = " + fmt_double(c.p_norm) + " must be >= 1 " + kStructural);
    {
        std::vector<int> levels;
        if (!parse_levels(c.levels, &levels)) {
            add("study: levels must be a comma-separated list of positive step counts " +
                kStructural);
        } else {
            for (size_t i = 0; i + 1 < levels.size(); ++i)
                if (levels[i] >= levels[i + 1]) {
                    add("study: levels must be strictly increasing " + kStructural);
                    break;
                }
            for (int lv : levels)
                if (lv < 2) {
                    add("study: every level needs at least 2 steps " + kStructural);
                    break;
                }
        }
    }
    if (c.fine_M < 0)
        add("study: fine_M = " + std::to_string(c.fine_M) + " must be >= 0 (0: reuse lattice M) " +
            kStructural);
    return v;
}

ExperimentConfig parse_and_validate(const std::string& text) {
    ParseOutcome out = parse_config_text(text);
    if (!out.violations.empty()) {
        std::string joined;
        for (size_t i = 0; i < out.violations.size(); ++i) {
            if (i) joined += "\n";
            joined += out.violations[i];
        }
        throw std::invalid_argument(joined);
    }
    return out.config;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    const auto d = [](double v) { return fmt_double(v); };
    os << "[grid]\n";
    os << "dimension = " << c.dimension << "\n";
    os << "n = " << c.n << "\n";
    os << "\n[lattice]\n";
    os << "T = " << d(c.T) << "\n";
    os << "M = " << c.M << "\n";
    os << "\n[coefficients]\n";
    os << "kind = " << c.coeff_kind << "\n";
    os << "a = " << d(c.coeff_a) << "\n";
    os << "a0 = " << d(c.coeff_a0) << "\n";
    os << "mu = " << d(c.coeff_mu) << "\n";
    os << "c0 = " << d(c.coeff_c0) << "\n";
    os << "c1 = " << d(c.coeff_c1) << "\n";
    os << "\n[operator]\n";
    os << "shift_w = " << d(c.shift_w) << "\n";
    os << "boundary_condition = " << c.boundary_condition << "\n";
    os << "\n[exponents]\n";
    os << "p = " << d(c.p) << "\n";
    os << "alpha = " << d(c.alpha) << "\n";
    os << "theta_B = " << d(c.theta_B) << "\n";
    os << "theta_C = " << d(c.theta_C) << "\n";
    os << "theta_G = " << d(c.theta_G) << "\n";
    os << "a = " << d(c.a) << "\n";
    os << "delta = " << d(c.delta) << "\n";
    os << "q = " << d(c.q) << "\n";
    os << "\n[noise.interior]\n";
    os << "kind = " << c.interior_kind << "\n";
    os << "spectrum = " << c.interior_spectrum << "\n";
    os << "modes = " << c.interior_modes << "\n";
    os << "r = " << d(c.interior_r) << "\n";
    os << "\n[noise.boundary]\n";
    os << "kind = " << c.boundary_kind << "\n";
    os << "spectrum = " << c.boundary_spectrum << "\n";
    os << "modes = " << c.boundary_modes << "\n";
    os << "s = " << d(c.boundary_s) << "\n";
    os << "\n[nonlinearity]\n";
    os << "F = " << c.F << "\n";
    os << "G = " << c.G << "\n";
    os << "B = " << c.B << "\n";
    os << "C = " << c.C << "\n";
    os << "\n[initial]\n";
    os << "u0 = " << c.u0 << "\n";
    os << "\n[run]\n";
    os << "master_seed = " << c.master_seed << "\n";
    os << "paths = " << c.paths << "\n";
    os << "workers = " << c.workers << "\n";
    os << "\n[output]\n";
    os << "prefix = " << c.prefix << "\n";
    os << "snapshot_stride = " << c.snapshot_stride << "\n";
    os << "\n[estimator]\n";
    os << "j_min = " << c.j_min << "\n";
    os << "j_max = " << c.j_max << "\n";
    os << "p_norm = " << d(c.p_norm) << "\n";
    os << "subtract_free_part = " << (c.subtract_free_part ? "true" : "false") << "\n";
    os << "\n[study]\n";
    os << "levels = " << c.levels << "\n";
    os << "fine_M = " << c.fine_M << "\n";
    return os.str();
}

uint64_t config_fingerprint(const ExperimentConfig& c) {
    // The worker count steers execution only — no output byte depends on it —
    // so it is normalized out of the experiment's identity.
    ExperimentConfig id = c;
    id.workers = 1;
    const std::string text = serialize_config(id);
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace bnspde
