#ifndef COGSHEAF_H
#define COGSHEAF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum CogsheafStatus {
  COGSHEAF_STATUS_OK = 0,
  // Well-formed input that fails a check; out-parameters are still set.
  COGSHEAF_STATUS_VALIDATION_FAILED = 1,
  COGSHEAF_STATUS_INVALID_INPUT = 2,
  COGSHEAF_STATUS_NULL_POINTER = 3,
  COGSHEAF_STATUS_UTF8 = 4,
  COGSHEAF_STATUS_IO = 5,
  COGSHEAF_STATUS_PANIC = 6,
} CogsheafStatus;

// A loaded instance bundle.
typedef struct CogsheafBundle CogsheafBundle;

// A developability certificate.
typedef struct CogsheafCertificate CogsheafCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Loads a bundle file; references resolve relative to its directory.
//
// # Safety
// `path` is a nul-terminated string and `out` is writable.
enum CogsheafStatus cogsheaf_bundle_from_path(const char *path, struct CogsheafBundle **out);

// Parses a bundle from JSON text; relative references resolve against
// `base_dir`, or the working directory when it is null.
//
// # Safety
// `json` and a non-null `base_dir` are nul-terminated strings; `out` is writable.
enum CogsheafStatus cogsheaf_bundle_from_json(const char *json,
                                              const char *base_dir,
                                              struct CogsheafBundle **out);

// # Safety
// `bundle` is null or came from a `cogsheaf_bundle_from_*` call and is not used again.
void cogsheaf_bundle_free(struct CogsheafBundle *bundle);

// Runs every validator on the bundle's complex, sheaf and morphism. A JSON
// array of reports goes to `report_json` when it is non-null.
//
// # Safety
// `bundle` is a live handle; `report_json` is null or writable.
enum CogsheafStatus cogsheaf_bundle_validate(const struct CogsheafBundle *bundle,
                                             char **report_json);

// The dev properties of the bundle's sheaf. Sets `verdict` and, when
// non-null, `report_json`.
//
// # Safety
// `bundle` is a live handle; `verdict` and `report_json` are null or writable.
enum CogsheafStatus cogsheaf_bundle_dev_check(const struct CogsheafBundle *bundle,
                                              bool *verdict,
                                              char **report_json);

// Builds the certificate for the bundle's sheaf. `out` is set whenever
// the status is `Ok` or `ValidationFailed`.
//
// # Safety
// `bundle` is a live handle and `out` is writable.
enum CogsheafStatus cogsheaf_develop(const struct CogsheafBundle *bundle,
                                     struct CogsheafCertificate **out);

// False for a null handle.
//
// # Safety
// `cert` is null or a live handle.
bool cogsheaf_certificate_verdict(const struct CogsheafCertificate *cert);

// # Safety
// `cert` is a live handle and `out` is writable.
enum CogsheafStatus cogsheaf_certificate_to_json(const struct CogsheafCertificate *cert,
                                                 char **out);

// # Safety
// `cert` is null or came from [`cogsheaf_develop`] and is not used again.
void cogsheaf_certificate_free(struct CogsheafCertificate *cert);

// The regular-representation sheaf of the bundle's morphism over `field`
// (`"Q"` or `"Fp:p"`; null means `Q`), as a self-contained sheaf file.
// Returns `ValidationFailed`, with `sheaf_json` still set, when the
// morphism is not injective on some local group.
//
// # Safety
// `bundle` is a live handle, `field` is null or a nul-terminated string and
// `sheaf_json` is writable.
enum CogsheafStatus cogsheaf_sheaf_from_morphism(const struct CogsheafBundle *bundle,
                                                 const char *field,
                                                 char **sheaf_json);

// # Safety
// `s` is null or a string returned by this library and not yet freed.
void cogsheaf_string_free(char *s);

// The message for the last failed call on this thread, or null. Valid
// until the next call into the library on the same thread.
const char *cogsheaf_last_error_message(void);

// The library version as a static string.
const char *cogsheaf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COGSHEAF_H */
