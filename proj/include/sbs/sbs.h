#ifndef SBS_SBS_H
#define SBS_SBS_H

#include <stddef.h>

#if defined(_WIN32)
#define SBS_API __declspec(dllexport)
#else
#define SBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbs_status {
  SBS_OK = 0,
  SBS_ERR_INVALID_ARGUMENT,
  SBS_ERR_GRID_MISMATCH,
  SBS_ERR_NOT_PROJECTABLE,
  SBS_ERR_INIT_FAILED,
  SBS_ERR_NO_BOX_CONVERGENCE,
  SBS_ERR_TRIVIAL_STATE,
  SBS_ERR_WINDOW_TOO_SMALL,
  SBS_ERR_OUT_OF_DOMAIN,
  SBS_ERR_CONFIG,
  SBS_ERR_IO,
  SBS_ERR_INTERNAL
} sbs_status;

/* Outcome of a solve. Exit codes of the solve command: 0, 2, 3, 2. */
typedef enum sbs_run_status {
  SBS_RUN_CONVERGED = 0,
  SBS_RUN_NOT_CONVERGED,
  SBS_RUN_COLLAPSED,
  SBS_RUN_FAILED
} sbs_run_status;

typedef struct sbs_config sbs_config;
typedef struct sbs_result sbs_result;
typedef struct sbs_suite sbs_suite;

/* Message of the last failed call on this thread; never NULL. */
SBS_API const char* sbs_last_error(void);
SBS_API const char* sbs_status_name(sbs_status status);

SBS_API sbs_status sbs_config_load(const char* path, sbs_config** out);
SBS_API sbs_status sbs_config_parse(const char* text, sbs_config** out);
SBS_API sbs_status sbs_config_set(sbs_config* cfg, const char* key, const char* value);
/* Normalized key = value text. Writes at most cap bytes including the NUL;
   *needed receives the full size including the NUL. */
SBS_API sbs_status sbs_config_serialize(const sbs_config* cfg, char* buf, size_t cap, size_t* needed);
SBS_API const char* sbs_config_output_dir(const sbs_config* cfg);
SBS_API void sbs_config_free(sbs_config* cfg);

/* Collapse and non-convergence are reported through the result, not the
   return status. */
SBS_API sbs_status sbs_solve(const sbs_config* cfg, sbs_result** out);
SBS_API sbs_run_status sbs_result_status(const sbs_result* r);
SBS_API int sbs_result_exit_code(const sbs_result* r);
SBS_API const char* sbs_result_message(const sbs_result* r);
/* 1 when the solver ran; the getters below return NaN / 0 otherwise. */
SBS_API int sbs_result_has_state(const sbs_result* r);
SBS_API double sbs_result_energy(const sbs_result* r);
SBS_API double sbs_result_residual(const sbs_result* r);
SBS_API long sbs_result_iterations(const sbs_result* r);
SBS_API double sbs_result_spacing(const sbs_result* r);
SBS_API int sbs_result_components(const sbs_result* r);
/* component 0 is u, j >= 1 is v_j. */
SBS_API sbs_status sbs_result_peak(const sbs_result* r, int component, double xyz[3], double* value);
SBS_API double sbs_result_separation(const sbs_result* r);
/* report.csv and the .sbsf field dumps into dir. */
SBS_API sbs_status sbs_result_write(const sbs_result* r, const char* dir);
SBS_API void sbs_result_free(sbs_result* r);

/* Runs every sweep cell and writes the CSV to csv_path. threads = 0 uses
   SBS_THREADS or the hardware concurrency. */
SBS_API sbs_status sbs_sweep(const sbs_config* cfg, size_t threads, const char* csv_path, size_t* cells);

SBS_API size_t sbs_suite_name_count(void);
SBS_API const char* sbs_suite_name(size_t index);
/* overrides may be NULL; only its explicit solver.* keys are applied. */
SBS_API sbs_status sbs_suite_run(const char* name, const sbs_config* overrides, size_t threads, sbs_suite** out);
SBS_API int sbs_suite_pass(const sbs_suite* s);
SBS_API double sbs_suite_seconds(const sbs_suite* s);
SBS_API size_t sbs_suite_check_count(const sbs_suite* s);
SBS_API sbs_status sbs_suite_check(const sbs_suite* s, size_t index, const char** name, double* measured,
                                   const char** relation, double* threshold, int* pass);
SBS_API const char* sbs_suite_table(const sbs_suite* s);
SBS_API sbs_status sbs_suite_write_csv(const sbs_suite* s, const char* path);
SBS_API void sbs_suite_free(sbs_suite* s);

SBS_API sbs_status sbs_render_pgm(const char* field_path, const char* pgm_path);

#ifdef __cplusplus
}
#endif

#endif
