#ifndef REGFAM_H
#define REGFAM_H

/* Generated by cbindgen from crates/regfam-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RegfamStatus {
  REGFAM_STATUS_OK = 0,
  REGFAM_STATUS_NULL_POINTER = 1,
  REGFAM_STATUS_INVALID_UTF8 = 2,
  REGFAM_STATUS_SYNTAX = 3,
  REGFAM_STATUS_DOMAIN = 4,
  REGFAM_STATUS_INCONCLUSIVE = 5,
  REGFAM_STATUS_PANIC = 6,
} RegfamStatus;

/**
 * Parsed family; create with [`regfam_family_parse`].
 */
typedef struct RegfamFamily RegfamFamily;

/**
 * Parsed normed space; create with [`regfam_space_parse`].
 */
typedef struct RegfamSpace RegfamSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The caller
 * owns the returned string.
 */
char *regfam_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void regfam_string_free(char *s);

/**
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be writable.
 */
enum RegfamStatus regfam_family_parse(const char *expr, struct RegfamFamily **out_family);

/**
 * # Safety
 * `family` must come from [`regfam_family_parse`] or be NULL.
 */
void regfam_family_free(struct RegfamFamily *family);

/**
 * Membership of the strictly increasing array `elems_ptr[0..len]`.
 *
 * # Safety
 * `family` must be a live handle, `elems_ptr` must point to `len` values and
 * `out_member` must be writable.
 */
enum RegfamStatus regfam_family_member(const struct RegfamFamily *family,
                                       const uint64_t *elems_ptr,
                                       size_t len,
                                       bool *out_member);

/**
 * Least admissible successor of `E`; `*out_has` is false when `E` is maximal.
 *
 * # Safety
 * As for [`regfam_family_member`].
 */
enum RegfamStatus regfam_family_min_extension(const struct RegfamFamily *family,
                                              const uint64_t *elems_ptr,
                                              size_t len,
                                              bool *out_has,
                                              uint64_t *out_next);

/**
 * The index `ι(F)` in Cantor normal form, e.g. `w^2`.
 *
 * # Safety
 * `family` must be a live handle and `out_text` writable.
 */
enum RegfamStatus regfam_family_iota(const struct RegfamFamily *family, char **out_text);

/**
 * The rank of `E` in the family, in Cantor normal form.
 *
 * # Safety
 * As for [`regfam_family_member`], with `out_text` writable.
 */
enum RegfamStatus regfam_family_rank(const struct RegfamFamily *family,
                                     const uint64_t *elems_ptr,
                                     size_t len,
                                     char **out_text);

/**
 * # Safety
 * `expr` must be a NUL-terminated string; `out_space` must be writable.
 */
enum RegfamStatus regfam_space_parse(const char *expr, struct RegfamSpace **out_space);

/**
 * # Safety
 * `space` must come from [`regfam_space_parse`] or be NULL.
 */
void regfam_space_free(struct RegfamSpace *space);

/**
 * Exact norm of a vector written as `[pos:num/den,...]`, returned as `p/q`.
 * A `support_limit` of 0 selects the default.
 *
 * # Safety
 * `space` must be a live handle, `vector` NUL-terminated, `out_text` writable.
 */
enum RegfamStatus regfam_space_norm(const struct RegfamSpace *space,
                                    const char *vector,
                                    size_t support_limit,
                                    char **out_text);

/**
 * Runs one command-line style command, e.g. `iota S[2]`. Output lines are
 * joined with newlines; `records` selects JSON lines. The status mirrors the
 * command line exit codes.
 *
 * # Safety
 * `line` must be NUL-terminated and `out_text` writable.
 */
enum RegfamStatus regfam_run(const char *line, bool records, char **out_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REGFAM_H */
