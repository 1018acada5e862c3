#ifndef SYMQFI_SYMQFI_H
#define SYMQFI_SYMQFI_H

/*
 * C interface to the symqfi library: permutation-invariant spin operators on
 * the symmetric subspace, ground-state QFI, and the sampling / scan / rank /
 * optimization campaigns.
 *
 * Every fallible call returns a symqfi_status. On failure the message is
 * available from symqfi_last_error() on the calling thread until its next
 * failing call. Objects are opaque handles released with their _free function;
 * strings handed out through char** are released with symqfi_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(SYMQFI_BUILDING)
#define SYMQFI_API __attribute__((visibility("default")))
#else
#define SYMQFI_API
#endif

#define SYMQFI_VERSION "0.1.0"

#ifdef __cplusplus
extern "C" {
#endif

typedef enum symqfi_status {
    SYMQFI_OK = 0,
    SYMQFI_ERR_INVALID_ARGUMENT = 1,
    SYMQFI_ERR_CONFIG = 2,
    SYMQFI_ERR_NUMERICAL = 3,
    SYMQFI_ERR_IO = 4,
    SYMQFI_ERR_INTERNAL = 5
} symqfi_status;

typedef enum symqfi_route {
    SYMQFI_ROUTE_SYMMETRIC = 0,
    SYMQFI_ROUTE_VARIANCE = 1,
    SYMQFI_ROUTE_FULL_ORACLE = 2
} symqfi_route;

typedef struct symqfi_operator symqfi_operator;
typedef struct symqfi_state symqfi_state;
typedef struct symqfi_config symqfi_config;
typedef struct symqfi_campaign symqfi_campaign;
typedef struct symqfi_gap_scan symqfi_gap_scan;
typedef struct symqfi_haar_set symqfi_haar_set;
typedef struct symqfi_optimum symqfi_optimum;

SYMQFI_API const char *symqfi_version(void);
SYMQFI_API const char *symqfi_last_error(void);
/* Key path of the last SYMQFI_ERR_CONFIG failure ("" if none), e.g. "generator.theta". */
SYMQFI_API const char *symqfi_last_error_key(void);
SYMQFI_API const char *symqfi_status_name(symqfi_status status);
SYMQFI_API void symqfi_string_free(char *s);

/* ---- operators ---- */

/* axis is 'x', 'y' or 'z'. */
SYMQFI_API symqfi_status symqfi_one_body_operator(char axis, int n_qubits, symqfi_operator **out);
/* S_abc with a 1/2 per Pauli factor and 1/k! prefactor. */
SYMQFI_API symqfi_status symqfi_correlator(int n_qubits, int a, int b, int c, symqfi_operator **out);
SYMQFI_API symqfi_status symqfi_brute_force_correlator(int n_qubits, int a, int b, int c, symqfi_operator **out);
SYMQFI_API symqfi_status symqfi_total_spin_squared(int n_qubits, symqfi_operator **out);
SYMQFI_API int symqfi_operator_n_qubits(const symqfi_operator *op);
SYMQFI_API symqfi_status symqfi_operator_entry(const symqfi_operator *op, int row, int col, double *re, double *im);
/* {n_qubits, re, im} with row-major arrays. */
SYMQFI_API symqfi_status symqfi_operator_to_json(const symqfi_operator *op, char **json_out);
SYMQFI_API void symqfi_operator_free(symqfi_operator *op);

SYMQFI_API int64_t symqfi_count_correlators(int k);
SYMQFI_API int64_t symqfi_total_terms(int n_qubits);

/* ---- states ---- */

SYMQFI_API symqfi_status symqfi_state_dicke(int n_qubits, int excitations, symqfi_state **out);
/* Rescales to unit norm; the prior | ||alpha|| - 1 | goes to *norm_deviation if non-null. */
SYMQFI_API symqfi_status symqfi_state_from_amplitudes(int n_qubits, const double *re, const double *im, size_t len,
                                                      double *norm_deviation, symqfi_state **out);
/* JSON file {n_qubits, re, im}; normalized on load. */
SYMQFI_API symqfi_status symqfi_state_from_file(const char *path, double *norm_deviation, symqfi_state **out);
SYMQFI_API int symqfi_state_n_qubits(const symqfi_state *state);
SYMQFI_API symqfi_status symqfi_state_to_json(const symqfi_state *state, char **json_out);
SYMQFI_API void symqfi_state_free(symqfi_state *state);

/* ---- QFI and bounds ---- */

/* generator: "linear-phase" or "rotating". The variance route takes 4 Var(K_theta) on U^{(x)N}|psi>. */
SYMQFI_API symqfi_status symqfi_qfi(const symqfi_state *state, const char *generator, double theta, symqfi_route route,
                                    double *value);
/* QfiResult JSON {value, route, theta, n_qubits, clamped_residual}. */
SYMQFI_API symqfi_status symqfi_qfi_json(const symqfi_state *state, const char *generator, double theta,
                                         symqfi_route route, char **json_out);
SYMQFI_API symqfi_status symqfi_qfi_upper_bound(const char *generator, double theta, int n_qubits, double *value);
SYMQFI_API symqfi_status symqfi_rotating_envelope(int n_qubits, double *value);
SYMQFI_API symqfi_status symqfi_cramer_rao(double fisher, double *value);
SYMQFI_API symqfi_status symqfi_tradeoff_bound(int n_qubits, double gap, double *value);

/* ---- campaign configuration ---- */

SYMQFI_API symqfi_status symqfi_config_new(symqfi_config **out);
/* Config object or run manifest; unknown keys rejected. */
SYMQFI_API symqfi_status symqfi_config_from_json(const char *json_text, symqfi_config **out);
SYMQFI_API symqfi_status symqfi_config_from_file(const char *path, symqfi_config **out);
SYMQFI_API symqfi_status symqfi_config_set_n_list(symqfi_config *cfg, const int *values, size_t len);
SYMQFI_API symqfi_status symqfi_config_set_k_list(symqfi_config *cfg, const int *values, size_t len);
SYMQFI_API symqfi_status symqfi_config_set_samples(symqfi_config *cfg, int samples);
SYMQFI_API symqfi_status symqfi_config_set_generator(symqfi_config *cfg, const char *name);
SYMQFI_API symqfi_status symqfi_config_set_theta(symqfi_config *cfg, double theta);
SYMQFI_API symqfi_status symqfi_config_set_theta_random(symqfi_config *cfg);
SYMQFI_API symqfi_status symqfi_config_set_master_seed(symqfi_config *cfg, uint64_t seed);
SYMQFI_API symqfi_status symqfi_config_set_degeneracy_tol(symqfi_config *cfg, double tol);
SYMQFI_API symqfi_status symqfi_config_set_keep_degenerate(symqfi_config *cfg, int keep);
SYMQFI_API symqfi_status symqfi_config_set_record_timing(symqfi_config *cfg, int enabled);
SYMQFI_API symqfi_status symqfi_config_set_optimize(symqfi_config *cfg, int restarts, int budget);
SYMQFI_API symqfi_status symqfi_config_master_seed(const symqfi_config *cfg, uint64_t *seed);
/* Range checks; SYMQFI_ERR_CONFIG with the key path on failure. */
SYMQFI_API symqfi_status symqfi_config_validate(const symqfi_config *cfg);
SYMQFI_API symqfi_status symqfi_config_to_json(const symqfi_config *cfg, char **json_out);
SYMQFI_API void symqfi_config_free(symqfi_config *cfg);

/* ---- sampling campaign ---- */

SYMQFI_API symqfi_status symqfi_sampling_campaign(const symqfi_config *cfg, int workers, symqfi_campaign **out);
SYMQFI_API size_t symqfi_campaign_record_count(const symqfi_campaign *c);
SYMQFI_API size_t symqfi_campaign_summary_count(const symqfi_campaign *c);
/* Row i of the summary; nondegenerate != 0 selects the degenerate-filtered table. */
SYMQFI_API symqfi_status symqfi_campaign_summary(const symqfi_campaign *c, size_t i, int nondegenerate, int *n_qubits,
                                                 int *k, double *mean_qfi, double *sem_qfi, int64_t *n_kept,
                                                 int64_t *n_degenerate);
/* Empty-cell warning of summary row i, or "" (owned by the campaign). */
SYMQFI_API const char *symqfi_campaign_warning(const symqfi_campaign *c, size_t i);
SYMQFI_API symqfi_status symqfi_campaign_write_records(const symqfi_campaign *c, const char *path);
SYMQFI_API symqfi_status symqfi_campaign_write_summary(const symqfi_campaign *c, int nondegenerate, const char *path);
SYMQFI_API symqfi_status symqfi_campaign_write_histogram(const symqfi_campaign *c, const char *path);
SYMQFI_API void symqfi_campaign_free(symqfi_campaign *c);

/* ---- gap-vs-QFI scan (single N and k) ---- */

SYMQFI_API symqfi_status symqfi_gap_scan_run(const symqfi_config *cfg, int workers, symqfi_gap_scan **out);
/* series 0: general specs, 1: diagonal-only specs. */
SYMQFI_API symqfi_status symqfi_gap_scan_write_records(const symqfi_gap_scan *s, int series, const char *path);
SYMQFI_API symqfi_status symqfi_gap_scan_violations(const symqfi_gap_scan *s, int series, int64_t *checked,
                                                    int64_t *violations, double *max_excess);
SYMQFI_API symqfi_status symqfi_gap_scan_report_json(const symqfi_gap_scan *s, char **json_out);
SYMQFI_API void symqfi_gap_scan_free(symqfi_gap_scan *s);

/* ---- Haar minimal interaction sets ---- */

SYMQFI_API symqfi_status symqfi_haar_minimal_set(int n_qubits, symqfi_haar_set **out);
SYMQFI_API int symqfi_haar_set_final_rank(const symqfi_haar_set *h);
SYMQFI_API size_t symqfi_haar_set_size(const symqfi_haar_set *h);
SYMQFI_API symqfi_status symqfi_haar_set_index(const symqfi_haar_set *h, size_t i, int *a, int *b, int *c);
/* {N, final_rank, indices: [{k, a, b, c}]}. */
SYMQFI_API symqfi_status symqfi_haar_set_to_json(const symqfi_haar_set *h, char **json_out);
SYMQFI_API void symqfi_haar_set_free(symqfi_haar_set *h);

/* ---- direct QFI optimization ---- */

SYMQFI_API symqfi_status symqfi_optimize(int n_qubits, int k, const char *generator, double theta, int restarts,
                                         int budget, uint64_t seed, double degeneracy_tol, int workers,
                                         symqfi_optimum **out);
/* theta the config prescribes for optimizing cell (N, k): fixed, or drawn from master_seed. */
SYMQFI_API symqfi_status symqfi_config_optimization_theta(const symqfi_config *cfg, int n_qubits, int k, double *theta);
/* -infinity when every visited point was degenerate. */
SYMQFI_API double symqfi_optimum_best_qfi(const symqfi_optimum *o);
SYMQFI_API double symqfi_optimum_upper_bound(const symqfi_optimum *o);
SYMQFI_API symqfi_status symqfi_optimum_to_json(const symqfi_optimum *o, char **json_out);
SYMQFI_API void symqfi_optimum_free(symqfi_optimum *o);

#ifdef __cplusplus
}
#endif

#endif
