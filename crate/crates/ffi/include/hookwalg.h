#ifndef HOOKWALG_H
#define HOOKWALG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. The numeric values of the first three match the command
// line exit codes.
typedef enum HwStatus {
  HW_STATUS_OK = 0,
  HW_STATUS_CHECKS_FAILED = 1,
  HW_STATUS_CONFIG_ERROR = 2,
  HW_STATUS_NULL_POINTER = 3,
  HW_STATUS_INVALID_UTF8 = 4,
  HW_STATUS_OUT_OF_RANGE = 5,
  HW_STATUS_PANIC = 6,
} HwStatus;

// A hook-type W-algebra for fixed (m, n), symbolic in k.
typedef struct HwHook HwHook;

// A finished run: its report and the JSON rendering.
typedef struct HwReport HwReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failing call on this thread; empty if none. The
// pointer stays valid until the next failing call on this thread.
const char *hw_last_error(void);

// Runs the command line `args[0..argc]` (flags only, without a program
// name) and stores the report in `*out`. Returns `HW_STATUS_OK` when every check
// passed and `HW_STATUS_CHECKS_FAILED` when some failed; `*out` is set in both
// cases.
//
// # Safety
// `args` must point to `argc` valid NUL-terminated strings and `out` must be
// a valid pointer.
enum HwStatus hw_run(const char *const *args, uintptr_t argc, struct HwReport **out);

// The report as JSON, owned by the report.
//
// # Safety
// `r` must come from [`hw_run`] and not be freed.
const char *hw_report_json(const struct HwReport *r);

// Number of checks in the report.
//
// # Safety
// `r` must come from [`hw_run`] and not be freed.
uintptr_t hw_report_len(const struct HwReport *r);

// Number of failed checks in the report.
//
// # Safety
// `r` must come from [`hw_run`] and not be freed.
uintptr_t hw_report_failed(const struct HwReport *r);

// Id and status (0 pass, 1 fail, 2 skip) of check `index`. The id is owned
// by the report.
//
// # Safety
// `r` must come from [`hw_run`]; `id` and `status` must be valid pointers.
enum HwStatus hw_report_check(const struct HwReport *r,
                              uintptr_t index,
                              const char **id,
                              int32_t *status);

// # Safety
// `r` must come from [`hw_run`] or be null; it must not be used afterwards.
void hw_report_free(struct HwReport *r);

// Builds the W-algebra generators for (m, n) with m > n ≥ 3.
//
// # Safety
// `out` must be a valid pointer.
enum HwStatus hw_hook_new(uintptr_t m, uintptr_t n, struct HwHook **out);

// Number of strong generators.
//
// # Safety
// `h` must come from [`hw_hook_new`] and not be freed.
uintptr_t hw_hook_generator_count(const struct HwHook *h);

// W^{(level)}_{i,j} written in the PBW basis; release the string with
// [`hw_string_free`].
//
// # Safety
// `h` must come from [`hw_hook_new`]; `out` must be a valid pointer.
enum HwStatus hw_hook_generator(const struct HwHook *h,
                                uint8_t level,
                                uintptr_t i,
                                uintptr_t j,
                                char **out);

// # Safety
// `h` must come from [`hw_hook_new`] or be null; it must not be used
// afterwards.
void hw_hook_free(struct HwHook *h);

// # Safety
// `s` must come from this library or be null.
void hw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOOKWALG_H */
