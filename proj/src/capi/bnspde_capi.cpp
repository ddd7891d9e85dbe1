#include "bnspde/bnspde.h"

#include "core/config.hpp"
#include "core/experiment.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

struct bnspde_config {
    bnspde::ExperimentConfig cfg;
};

namespace {
thread_local std::string g_last_error;

void set_error(const std::string& s) { g_last_error = s; }
void clear_error() { g_last_error.clear(); }

void write_msg(char* msg, size_t msglen, const std::string& s) {
    if (!msg || msglen == 0) return;
    const size_t m = std::min(msglen - 1, s.size());
    std::memcpy(msg, s.data(), m);
    msg[m] = '\0';
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "\n";
        out += parts[i];
    }
    return out;
}

bnspde_status parse_common(const std::string& text, bnspde_config** out) {
    const bnspde::ParseOutcome parsed = bnspde::parse_config_structure(text);
    if (!parsed.violations.empty()) {
        set_error(join(parsed.violations));
        return BNSPDE_E_PARSE;
    }
    *out = new bnspde_config{parsed.config};
    clear_error();
    return BNSPDE_OK;
}
} // namespace

extern "C" {

const char* bnspde_version(void) { return "1.0.0"; }

const char* bnspde_last_error(void) { return g_last_error.c_str(); }

bnspde_status bnspde_config_parse_file(const char* path, bnspde_config** out) {
    if (!path || !out) {
        set_error("path and out must be non-null");
        return BNSPDE_E_ARG;
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        set_error(std::string("cannot read config file ") + path);
        return BNSPDE_E_IO;
    }
    std::ostringstream os;
    os << is.rdbuf();
    return parse_common(os.str(), out);
}

bnspde_status bnspde_config_parse_text(const char* text, bnspde_config** out) {
    if (!text || !out) {
        set_error("text and out must be non-null");
        return BNSPDE_E_ARG;
    }
    return parse_common(text, out);
}

void bnspde_config_free(bnspde_config* cfg) { delete cfg; }

bnspde_status bnspde_config_override(bnspde_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        set_error("cfg, key, and value must be non-null");
        return BNSPDE_E_ARG;
    }
    std::string error;
    if (!bnspde::apply_config_override(cfg->cfg, key, value, &error)) {
        set_error(error);
        return BNSPDE_E_PARSE;
    }
    clear_error();
    return BNSPDE_OK;
}

bnspde_status bnspde_config_validate(const bnspde_config* cfg, char* msg, size_t msglen) {
    if (!cfg) {
        set_error("cfg must be non-null");
        return BNSPDE_E_ARG;
    }
    const std::vector<std::string> violations = bnspde::validate_config(cfg->cfg);
    if (!violations.empty()) {
        write_msg(msg, msglen, violations.front());
        set_error(join(violations));
        return BNSPDE_E_VALIDATE;
    }
    write_msg(msg, msglen, "");
    clear_error();
    return BNSPDE_OK;
}

uint64_t bnspde_config_fingerprint(const bnspde_config* cfg) {
    if (!cfg) return 0;
    return bnspde::config_fingerprint(cfg->cfg);
}

size_t bnspde_config_serialize(const bnspde_config* cfg, char* buf, size_t buflen) {
    if (!cfg) {
        write_msg(buf, buflen, "");
        return 0;
    }
    const std::string text = bnspde::serialize_config(cfg->cfg);
    write_msg(buf, buflen, text);
    return text.size();
}

bnspde_status bnspde_run(const bnspde_config* cfg, const char* mode, const char* out_dir,
                         long paths_override, long long seed_override, char* msg, size_t msglen) {
    if (!cfg || !mode) {
        set_error("cfg and mode must be non-null");
        return BNSPDE_E_ARG;
    }
    bnspde::RunMode run_mode;
    try {
        run_mode = bnspde::parse_run_mode(mode);
    } catch (const std::invalid_argument& e) {
        write_msg(msg, msglen, e.what());
        set_error(e.what());
        return BNSPDE_E_ARG;
    }
    if (!out_dir && run_mode != bnspde::RunMode::ValidateOnly) {
        set_error("out_dir must be non-null for modes that write artifacts");
        return BNSPDE_E_ARG;
    }

    bnspde::ExperimentConfig effective = cfg->cfg;
    if (paths_override > 0) effective.paths = static_cast<int>(paths_override);
    if (seed_override >= 0) effective.master_seed = static_cast<uint64_t>(seed_override);

    {
        const std::vector<std::string> violations = bnspde::validate_config(effective);
        if (!violations.empty()) {
            write_msg(msg, msglen, violations.front());
            set_error(join(violations));
            return BNSPDE_E_VALIDATE;
        }
    }

    try {
        const bnspde::RunResult result =
            bnspde::run_experiment(effective, run_mode, out_dir ? out_dir : "");
        std::string line = std::string(mode) + (result.exit_code == 0 ? ": ok" : ": failed");
        char fp[32];
        std::snprintf(fp, sizeof fp, "0x%016llx",
                      static_cast<unsigned long long>(bnspde::config_fingerprint(effective)));
        line += std::string("; fingerprint ") + fp;
        line += "; seed " + std::to_string(effective.master_seed);
        if (!result.artifacts.empty())
            line += "; artifacts " + std::to_string(result.artifacts.size());
        write_msg(msg, msglen, line);
        if (result.exit_code != 0) {
            set_error(result.summary);
            return BNSPDE_E_RUNTIME;
        }
        clear_error();
        return BNSPDE_OK;
    } catch (const std::invalid_argument& e) {
        write_msg(msg, msglen, e.what());
        set_error(e.what());
        return BNSPDE_E_VALIDATE;
    } catch (const std::exception& e) {
        write_msg(msg, msglen, e.what());
        set_error(e.what());
        return BNSPDE_E_RUNTIME;
    }
}

} // extern "C"
