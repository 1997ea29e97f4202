/* C interface to the magnetic Euler-Arnold toolkit.
 *
 * Every function returning int returns a mea_status. On failure the
 * message of the most recent error on the calling thread is available from
 * mea_last_error(), and mea_last_error_kind() names its category
 * ("missing-file", "syntax", "unknown-key", "schema" for config errors,
 * "divergence", "solver", "io", "usage", "check"). Handles are opaque and
 * may be used from several threads as long as each call gets its own
 * output buffers. */
#ifndef MEA_H
#define MEA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MEA_BUILDING_LIBRARY)
#    define MEA_API __declspec(dllexport)
#  else
#    define MEA_API __declspec(dllimport)
#  endif
#else
#  define MEA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Identical to the command-line exit codes. */
typedef enum mea_status {
  MEA_OK = 0,
  MEA_ERR_USAGE = 1,      /* invalid argument, contract violation, internal error */
  MEA_ERR_CONFIG = 2,     /* missing file, syntax, unknown key, schema violation */
  MEA_ERR_DIVERGENCE = 3, /* non-finite state while integrating */
  MEA_ERR_SOLVER = 4,     /* singular inertia or non-invertible elliptic mode */
  MEA_ERR_CHECK = 5,      /* an invariant check failed */
  MEA_ERR_IO = 6          /* reading or writing a file failed */
} mea_status;

typedef enum mea_scheme { MEA_SCHEME_RK4 = 0, MEA_SCHEME_IF_RK4 = 1 } mea_scheme;

typedef struct mea_config mea_config;
typedef struct mea_system mea_system;

/* Receives one line of command output; stream 0 is regular output, 1 is
 * diagnostics. */
typedef void (*mea_line_fn)(int stream, const char* line, void* user);

typedef struct mea_options {
  int has_seed;          /* nonzero: `seed` overrides the config's [run] seed */
  uint64_t seed;
  const char* out_dir;   /* NULL: use [output] dir */
  int quiet;
  int flip_bracket;      /* check only: negative control */
  mea_line_fn on_line;   /* NULL: print to stdout / stderr */
  void* user;
} mea_options;

MEA_API const char* mea_version(void);
MEA_API const char* mea_last_error(void);
MEA_API const char* mea_last_error_kind(void);
MEA_API const char* mea_status_name(int status);

MEA_API void mea_options_init(mea_options* opt);

MEA_API int mea_config_load(const char* path, mea_config** out);
/* `base_dir` resolves relative data-file paths; NULL means ".". */
MEA_API int mea_config_parse(const char* text, const char* base_dir, mea_config** out);
/* Normalized text. Writes at most `cap` bytes including the terminator and
 * stores the full length (without terminator) in *len. */
MEA_API int mea_config_normalized(const mea_config* cfg, char* buf, size_t cap, size_t* len);
MEA_API void mea_config_free(mea_config* cfg);

MEA_API int mea_run(const mea_config* cfg, const mea_options* opt);
/* `cfg` may be NULL: default sizes and seed 0. */
MEA_API int mea_check(const mea_config* cfg, const mea_options* opt);
MEA_API int mea_convergence(const mea_config* cfg, const mea_options* opt);
MEA_API int mea_sweep(const mea_config* cfg, const mea_options* opt);

/* Direct access to the configured system. States are arrays of
 * mea_system_dim() doubles in the snapshot layout. */
MEA_API int mea_system_create(const mea_config* cfg, mea_system** out);
MEA_API void mea_system_free(mea_system* sys);
MEA_API size_t mea_system_dim(const mea_system* sys);
MEA_API int mea_system_initial_state(const mea_system* sys, double* out, size_t n);
MEA_API int mea_system_rhs(const mea_system* sys, const double* u, double* out, size_t n);
MEA_API int mea_system_energy(const mea_system* sys, const double* u, size_t n, double* energy);
MEA_API int mea_system_step(const mea_system* sys, double* u, size_t n, double dt, int scheme);

/* Reads a snapshot payload. Stores the value count in *count and the time
 * in *time; copies min(count, cap) values into `data` (may be NULL). */
MEA_API int mea_snapshot_read(const char* path, double* data, size_t cap, size_t* count, double* time);

#ifdef __cplusplus
}
#endif

#endif /* MEA_H */
