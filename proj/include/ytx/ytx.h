/* Licensed under the Apache License 2.0 (see LICENSE file). */

/* C interface to the ytx target-transformation library.
 *
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function. Every call that can fail returns a ytx_status and records a
 * message retrievable with ytx_last_error() on the calling thread. Strings
 * returned through char** are heap-allocated and released with
 * ytx_string_free().
 */

#ifndef YTX_H
#define YTX_H

#include <stddef.h>

#if defined(YTX_BUILDING_LIBRARY)
#define YTX_API __attribute__((visibility("default")))
#else
#define YTX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2-4 match the command-line exit codes. */
typedef enum ytx_status {
  YTX_OK = 0,
  YTX_ERR_INVALID_ARGUMENT = 1,
  YTX_ERR_CONFIG = 2,
  YTX_ERR_DATA = 3,
  YTX_ERR_DOMAIN = 4,
  YTX_ERR_INTERNAL = 5
} ytx_status;

typedef struct ytx_dataset ytx_dataset;
typedef struct ytx_transform ytx_transform;

YTX_API const char* ytx_version(void);
YTX_API const char* ytx_last_error(void);
YTX_API void ytx_string_free(char* s);

/* roles_json: ColumnRoles document, or NULL to use the last column as target. */
YTX_API ytx_status ytx_dataset_load_csv(const char* path, const char* roles_json, ytx_dataset** out);
YTX_API void ytx_dataset_free(ytx_dataset* ds);
YTX_API ytx_status ytx_dataset_shape(const ytx_dataset* ds, size_t* rows, size_t* features);
YTX_API size_t ytx_dataset_dropped_rows(const ytx_dataset* ds);
/* Borrowed pointer, valid until the dataset is freed. */
YTX_API ytx_status ytx_dataset_target(const ytx_dataset* ds, const double** y, size_t* n);

/* options_json may be NULL or {"deflation_index": path, "base_time": key}. */
YTX_API ytx_status ytx_transform_fit(const ytx_dataset* ds, const char* kind, const char* options_json,
                                     ytx_transform** out);
YTX_API void ytx_transform_free(ytx_transform* t);
YTX_API const char* ytx_transform_kind(const ytx_transform* t);
/* Nonzero when name is a known transform kind. */
YTX_API int ytx_transform_kind_known(const char* name);
YTX_API ytx_status ytx_transform_to_json(const ytx_transform* t, char** out);
YTX_API ytx_status ytx_transform_from_json(const char* json, ytx_transform** out);

/* ctx supplies per-row role columns for contextual kinds and must have n
 * rows; pass NULL for kinds that depend on y alone. */
YTX_API ytx_status ytx_transform_forward(const ytx_transform* t, const ytx_dataset* ctx, const double* y, size_t n,
                                         double* out);
YTX_API ytx_status ytx_transform_inverse(const ytx_transform* t, const ytx_dataset* ctx, const double* z, size_t n,
                                         double* out);

/* Writes the dataset's source CSV, restricted to its kept rows, with the
 * target column replaced by f(y). Identity keeps the original cell text. */
YTX_API ytx_status ytx_transform_write_csv(const ytx_transform* t, const ytx_dataset* ds, const char* path);

/* thresholds_json may be NULL. Produces a DiagnosticReport document. */
YTX_API ytx_status ytx_diagnose(const ytx_dataset* ds, const char* thresholds_json, char** out);

/* config_json keys: models (names or {"model","alpha"} objects), alpha,
 * transforms (names, or ["auto"]), seed, threads, thresholds, dataset_name,
 * deflation_index, base_time. Produces a BenchmarkReport document. */
YTX_API ytx_status ytx_benchmark(const ytx_dataset* ds, const char* config_json, char** out);

/* Markdown tables from one or more BenchmarkReport documents. */
YTX_API ytx_status ytx_report_markdown(const char* const* report_jsons, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif /* YTX_H */
