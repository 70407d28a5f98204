#ifndef PSAES_H
#define PSAES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PSAES_BUILDING_LIBRARY)
#define PSAES_API __attribute__((visibility("default")))
#else
#define PSAES_API
#endif

typedef enum psaes_status {
    PSAES_OK = 0,
    PSAES_ERR_INVALID_ARGUMENT = 1, /* bad key, value or call sequence */
    PSAES_ERR_STATE = 2,            /* distribution state corrupted during a run */
    PSAES_ERR_OBJECTIVE = 3,        /* objective returned a non-finite value */
    PSAES_ERR_IO = 4,               /* output file exists or cannot be written */
    PSAES_ERR_INTERNAL = 5,
    PSAES_ERR_BUFFER_TOO_SMALL = 6,
    PSAES_ERR_RUN_FAILED = 7        /* a run inside a batch failed; see psaes_last_error */
} psaes_status;

typedef struct psaes_config psaes_config;
typedef struct psaes_optimizer psaes_optimizer;

/* Message for the last failing call on this thread; never NULL. */
PSAES_API const char *psaes_last_error(void);
PSAES_API const char *psaes_version(void);
PSAES_API const char *psaes_status_name(psaes_status s);

PSAES_API psaes_status psaes_config_create(psaes_config **out);
PSAES_API void psaes_config_destroy(psaes_config *cfg);

/* Keys match the command-line flag names without dashes, e.g. "kappa",
   "max-gens". */
PSAES_API psaes_status psaes_config_set(psaes_config *cfg, const char *key, const char *value);

/* key=value lines; '#' starts a comment. */
PSAES_API psaes_status psaes_config_load(psaes_config *cfg, const char *path);
PSAES_API psaes_status psaes_config_validate(const psaes_config *cfg);

/* Writes the config as key=value lines. *needed receives the size including
   the terminating NUL; buf may be NULL to query it. */
PSAES_API psaes_status psaes_config_to_string(const psaes_config *cfg, char *buf, size_t cap, size_t *needed);

typedef struct psaes_trace_row {
    size_t g;
    double lambda_real;
    size_t lambda_r;
    double sigma_pre_correction;
    double sigma_post_correction;
    int correction_branch; /* 0 skipped, 1 kappa-scaled, 2 full ratio, 3 always, -1 none */
    double p_sigma_norm;
    double f_best;
    double f_of_mean;
    uint64_t fevals_cumulative;
    int64_t wall_micros;
} psaes_trace_row;

PSAES_API psaes_status psaes_optimizer_create(const psaes_config *cfg, psaes_optimizer **out);
PSAES_API void psaes_optimizer_destroy(psaes_optimizer *opt);
PSAES_API psaes_status psaes_optimizer_step(psaes_optimizer *opt, psaes_trace_row *row);
PSAES_API int psaes_optimizer_done(const psaes_optimizer *opt);
PSAES_API size_t psaes_optimizer_dimension(const psaes_optimizer *opt);
PSAES_API psaes_status psaes_optimizer_mean(const psaes_optimizer *opt, double *out, size_t n);
PSAES_API double psaes_optimizer_sigma(const psaes_optimizer *opt);

typedef void (*psaes_path_fn)(const char *path, void *user);

/* Shared settings for the commands that write files. seeds == NULL means
   1..20. */
typedef struct psaes_batch {
    const char *out_dir;
    int force;
    size_t jobs;
    const uint64_t *seeds;
    size_t n_seeds;
    psaes_path_fn on_path;
    void *user;
} psaes_batch;

/* Single run; writes one trace CSV. */
PSAES_API psaes_status psaes_run(const psaes_config *cfg, const psaes_batch *batch);

/* Forced population-size schedule, direction "increasing" or "decreasing".
   with_correction selects psa-general, otherwise psa-no-correction. */
PSAES_API psaes_status psaes_experiment_forced(const psaes_config *cfg, const char *direction, int with_correction,
                                               const psaes_batch *batch);

/* kappas == NULL means 0.0, 0.1, ..., 1.0. */
PSAES_API psaes_status psaes_kappa_sweep(const psaes_config *cfg, const double *kappas, size_t n_kappas,
                                         const psaes_batch *batch);

PSAES_API psaes_status psaes_compare(const psaes_config *cfg, const psaes_batch *batch);

typedef void (*psaes_line_fn)(const char *line, void *user);

PSAES_API psaes_status psaes_selftest(psaes_line_fn on_line, void *user, size_t *passed, size_t *failed);

#ifdef __cplusplus
}
#endif

#endif
