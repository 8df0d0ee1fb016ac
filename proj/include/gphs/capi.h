#ifndef GPHS_CAPI_H
#define GPHS_CAPI_H

#include <stdint.h>

#if defined(_WIN32)
#define GPHS_API __declspec(dllexport)
#else
#define GPHS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes shared with the CLI exit codes. */
typedef enum gphs_status {
  GPHS_OK = 0,
  GPHS_GUARANTEE_FAILED = 2,
  GPHS_RESOURCE_EXCEEDED = 3,
  GPHS_INPUT_ERROR = 4,
  GPHS_INTERNAL_ERROR = 5
} gphs_status;

/* Labeled Gaussian sample behind an opaque handle. */
typedef struct gphs_dataset gphs_dataset;

/* Message of the calling thread's last failed call; never NULL. */
GPHS_API const char* gphs_last_error(void);

/* Frees strings returned through char** out parameters. */
GPHS_API void gphs_string_free(char* s);

/* Generates a planted dataset from a JSON spec:
 *   {"dim": d, "n": n, "seed": s, "domain": "train"|"valid"|"test",
 *    "planted": {"concept": ..., "noise": "none"|"rcn"|"slab", "p": ...}}
 * "domain" defaults to "train". */
GPHS_API gphs_status gphs_dataset_generate(const char* spec_json, gphs_dataset** out);

/* Reads a dataset file, text or binary (decided by the magic bytes). */
GPHS_API gphs_status gphs_dataset_read(const char* path, gphs_dataset** out);

/* Writes text (binary = 0) or binary (binary != 0) format. */
GPHS_API gphs_status gphs_dataset_write(const gphs_dataset* ds, const char* path, int binary);

GPHS_API int32_t gphs_dataset_dim(const gphs_dataset* ds);
GPHS_API int64_t gphs_dataset_size(const gphs_dataset* ds);
GPHS_API void gphs_dataset_free(gphs_dataset* ds);

/* Runs the learner selected by config "task". The config JSON is the
 * documented config schema plus one extra key "data", either
 * {"planted": {...}} or {"path": "file"}. On success and on guarantee
 * failure *report_json holds the full report; on a stage error it holds the
 * partial report when one exists. Free with gphs_string_free. */
GPHS_API gphs_status gphs_run_learner(const char* config_json, char** report_json);

/* Least-squares baseline over the same config schema. */
GPHS_API gphs_status gphs_run_baseline_l2(const char* config_json, char** report_json);

/* Exhaustive proper search (dim <= 3) over the same config schema. */
GPHS_API gphs_status gphs_run_brute_force(const char* config_json, char** report_json);

/* Runs property suites given as a comma-separated list (empty or NULL = all
 * six). Returns GPHS_OK when every check passes, GPHS_GUARANTEE_FAILED
 * otherwise; *report_json holds {"pass": ..., "suites": ...}. */
GPHS_API gphs_status gphs_run_verify(const char* suites_csv, int threads, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* GPHS_CAPI_H */
