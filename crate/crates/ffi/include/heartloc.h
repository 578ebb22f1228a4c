#ifndef HEARTLOC_H
#define HEARTLOC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. The first four agree with the CLI exit codes.
 */
typedef enum HlStatus {
  HL_STATUS_OK = 0,
  HL_STATUS_VERIFICATION_FAILED = 1,
  HL_STATUS_INVALID_INPUT = 2,
  HL_STATUS_INCONCLUSIVE = 3,
  HL_STATUS_NULL_POINTER = 4,
  HL_STATUS_INVALID_UTF8 = 5,
  HL_STATUS_PANIC = 6,
} HlStatus;

/**
 * A parsed and built problem.
 */
typedef struct HlProblem HlProblem;

/**
 * The rendered report of one command.
 */
typedef struct HlReport HlReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call on the same thread; never null.
 */
const char *hl_last_error(void);

/**
 * Parses a problem file. `field` overrides the file's characteristic
 * unless it is 0.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HlStatus hl_problem_parse(const char *source,
                               uint32_t field,
                               uint64_t seed,
                               struct HlProblem **out);

/**
 * Loads a shipped example (`"ex61"` or `"ex62"`).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HlStatus hl_problem_demo(const char *name, struct HlProblem **out);

/**
 * Number of indecomposables in the problem's atlas; 0 for null.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t hl_problem_atlas_len(const struct HlProblem *problem);

/**
 * # Safety
 * `problem` must be null or a handle not yet freed.
 */
void hl_problem_free(struct HlProblem *problem);

/**
 * Runs a whitespace-separated command line such as
 * `"verify-main-theorem C D Cprime"`. A report is produced both for
 * `HL_STATUS_OK` and `HL_STATUS_VERIFICATION_FAILED`; otherwise `*out` is null.
 *
 * # Safety
 * `problem` must be a live handle, `command` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum HlStatus hl_run(const struct HlProblem *problem, const char *command, struct HlReport **out);

/**
 * The report text; valid while the report lives. Null for null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
const char *hl_report_text(const struct HlReport *report);

/**
 * Whether every clause passed; false for null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
bool hl_report_passed(const struct HlReport *report);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void hl_report_free(struct HlReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEARTLOC_H */
