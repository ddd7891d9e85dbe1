/* bnspde: simulator for semilinear parabolic SPDEs with interior and
 * Neumann boundary noise on the interval (0,1) and the unit square.
 *
 * C interface: opaque handles + integer status codes. All functions are
 * thread-compatible: distinct handles may be used concurrently; a single
 * handle must not be mutated from two threads at once. Error detail text
 * for the most recent failing call on the current thread is available via
 * bnspde_last_error().
 */
#ifndef BNSPDE_H
#define BNSPDE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct bnspde_config bnspde_config; /* opaque experiment configuration */

typedef enum bnspde_status {
    BNSPDE_OK = 0,
    BNSPDE_E_ARG = 1,      /* null/invalid argument */
    BNSPDE_E_PARSE = 2,    /* config text malformed or has unknown keys */
    BNSPDE_E_VALIDATE = 3, /* config violates an admissibility rule */
    BNSPDE_E_IO = 4,       /* file/directory error */
    BNSPDE_E_RUNTIME = 5   /* failure while running the experiment */
} bnspde_status;

/* Library version, e.g. "0.1.0". Never NULL. */
const char* bnspde_version(void);

/* Thread-local detail message for the most recent failure on this thread.
 * Never NULL; empty string when the last call on this thread succeeded. */
const char* bnspde_last_error(void);

/* Parse a configuration from a file or from text. On success stores a new
 * handle in *out (free with bnspde_config_free). Unknown keys are rejected. */
bnspde_status bnspde_config_parse_file(const char* path, bnspde_config** out);
bnspde_status bnspde_config_parse_text(const char* text, bnspde_config** out);
void bnspde_config_free(bnspde_config* cfg);

/* Override a single "section.key" with a value given as text, e.g.
 * ("run.paths", "64"). Same validation as the parser. */
bnspde_status bnspde_config_override(bnspde_config* cfg, const char* key, const char* value);

/* Validate admissibility (exponent ranges, noise regimes, boundary-condition
 * kind). On failure returns BNSPDE_E_VALIDATE and writes the first violation
 * message (with its rule anchor) into msg if provided. */
bnspde_status bnspde_config_validate(const bnspde_config* cfg, char* msg, size_t msglen);

/* 64-bit fingerprint of the canonical serialized form. */
uint64_t bnspde_config_fingerprint(const bnspde_config* cfg);

/* Canonical serialized text; returns required length (excluding NUL) and
 * writes up to buflen bytes (NUL-terminated when buflen > 0). */
size_t bnspde_config_serialize(const bnspde_config* cfg, char* buf, size_t buflen);

/* Run one experiment mode. mode is one of:
 *   "solve" | "deterministic-oracle" | "variational-check" |
 *   "regularity-study" | "convergence-study" | "validate-only"
 * out_dir receives the artifacts (created if missing; may be NULL for
 * validate-only). paths_override > 0 or seed_override >= 0 replace the
 * configured values. A human-readable one-line result is written to msg. */
bnspde_status bnspde_run(const bnspde_config* cfg, const char* mode, const char* out_dir,
                         long paths_override, long long seed_override, char* msg, size_t msglen);

#ifdef __cplusplus
}
#endif

#endif /* BNSPDE_H */
