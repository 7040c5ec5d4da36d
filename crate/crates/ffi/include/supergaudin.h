#ifndef SUPERGAUDIN_H
#define SUPERGAUDIN_H

/* Generated by cbindgen from the supergaudin-ffi sources; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  // A required pointer argument was null.
  SG_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  SG_STATUS_INVALID_UTF8 = 2,
  // The configuration was rejected.
  SG_STATUS_CONFIG_ERROR = 3,
  // A computation failed.
  SG_STATUS_COMPUTE_ERROR = 4,
  // The report was produced but at least one check failed.
  SG_STATUS_CHECKS_FAILED = 5,
  // A Rust panic was caught at the boundary.
  SG_STATUS_PANIC = 6,
} SgStatus;

// Opaque handle to a constructed system.
typedef struct SgSystem SgSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Build a system from a JSON run configuration and store a new handle in
// `*out_handle`. The handle must be released with [`sg_system_free`].
//
// # Safety
// `config_json` must be a valid NUL-terminated string and `out_handle` a valid
// pointer to writable storage.
enum SgStatus sg_system_new(const char *config_json, struct SgSystem **out_handle);

// Release a handle. Null is accepted and ignored.
//
// # Safety
// `handle` must be null or a pointer returned by [`sg_system_new`] that has not
// been freed.
void sg_system_free(struct SgSystem *handle);

// Dimension of the tensor product module of the system.
//
// # Safety
// `handle` must be a live handle and `out_dim` a valid pointer.
enum SgStatus sg_system_module_dim(const struct SgSystem *handle, size_t *out_dim);

// Run the configured checks and store the JSON report in `*out_json`. The string
// must be released with [`sg_string_free`]. Returns `CHECKS_FAILED` (with the
// report still written) when any check failed.
//
// # Safety
// `handle` must be a live handle and `out_json` a valid pointer.
enum SgStatus sg_run_checks(const struct SgSystem *handle, char **out_json);

// Release a string returned by the library. Null is accepted and ignored.
//
// # Safety
// `s` must be null or a string returned by this library that has not been freed.
void sg_string_free(char *s);

// Message describing the most recent failure on this thread, or an empty string.
// The pointer stays valid until the next library call on the same thread.
const char *sg_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *sg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERGAUDIN_H */
