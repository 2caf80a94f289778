#ifndef FINCLEAR_H
#define FINCLEAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum FinclearStatus {
  FINCLEAR_STATUS_OK = 0,
  FINCLEAR_STATUS_NULL_POINTER = 1,
  FINCLEAR_STATUS_INVALID_UTF8 = 2,
  FINCLEAR_STATUS_INPUT = 3,
  FINCLEAR_STATUS_PROPERTY = 4,
  FINCLEAR_STATUS_DEGENERATE = 5,
  FINCLEAR_STATUS_SIZE = 6,
  FINCLEAR_STATUS_IO = 7,
  FINCLEAR_STATUS_PANIC = 8,
} FinclearStatus;

/**
 * A financial network, with the variable map of a compiled circuit if any.
 */
typedef struct FinclearNetwork FinclearNetwork;

/**
 * A verified clearing vector.
 */
typedef struct FinclearReport FinclearReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *finclear_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void finclear_string_free(char *s);

/**
 * Parses a network JSON document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FinclearStatus finclear_network_from_json(const char *json, struct FinclearNetwork **out);

/**
 * Compiles a Pure-Circuit text at gap `delta` (`p/q` or decimal; null for
 * 2/13), optionally merging all CDS debtors into one central debtor.
 *
 * # Safety
 * `circuit` and a non-null `delta` must be NUL-terminated; `out` writable.
 */
enum FinclearStatus finclear_compile_circuit(const char *circuit,
                                             const char *delta,
                                             bool merge,
                                             struct FinclearNetwork **out);

/**
 * Releases a network. Null is ignored.
 *
 * # Safety
 * `net` must come from this library and not have been freed.
 */
void finclear_network_free(struct FinclearNetwork *net);

/**
 * Number of banks, or 0 for null.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t finclear_network_bank_count(const struct FinclearNetwork *net);

/**
 * Canonical JSON of the network.
 *
 * # Safety
 * `net` must be a live handle; `out` writable.
 */
enum FinclearStatus finclear_network_to_json(const struct FinclearNetwork *net, char **out);

/**
 * Exact clearing of a covered network whose CDS debtors are fully capitalized.
 *
 * # Safety
 * `net` must be a live handle; `out` writable.
 */
enum FinclearStatus finclear_solve_covered(const struct FinclearNetwork *net,
                                           struct FinclearReport **out);

/**
 * Exact clearing of a central-CDS-debtor network by exhaustive search.
 *
 * # Safety
 * `net` must be a live handle; `out` writable.
 */
enum FinclearStatus finclear_solve_mblp(const struct FinclearNetwork *net,
                                        struct FinclearReport **out);

/**
 * Damped iteration from all ones with the default damping, then Newton
 * polish if `eps` is missed. The report records whether `eps` was reached.
 *
 * # Safety
 * `net` must be a live handle, `eps` NUL-terminated, `out` writable.
 */
enum FinclearStatus finclear_solve_iterate(const struct FinclearNetwork *net,
                                           const char *eps,
                                           size_t max_iter,
                                           struct FinclearReport **out);

/**
 * Checks a `bank,rate` CSV against the weak `eps`-approximate clearing condition.
 *
 * # Safety
 * `net` must be a live handle, `rates_csv` and `eps` NUL-terminated, `out` writable.
 */
enum FinclearStatus finclear_verify(const struct FinclearNetwork *net,
                                    const char *rates_csv,
                                    const char *eps,
                                    struct FinclearReport **out);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `report` must come from this library and not have been freed.
 */
void finclear_report_free(struct FinclearReport *report);

/**
 * Whether the rates meet the clearing condition at the report's tolerance.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
bool finclear_report_passed(const struct FinclearReport *report);

/**
 * Largest residual `|r_i - f_i(r)|`, or NaN for null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double finclear_report_max_residual(const struct FinclearReport *report);

/**
 * Number of rates in the report, or 0 for null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t finclear_report_len(const struct FinclearReport *report);

/**
 * Rate of bank `index` (banks in lexicographic order), or NaN when out of range.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double finclear_report_rate(const struct FinclearReport *report, size_t index);

/**
 * Rates as `bank,rate,decimal` CSV with exact `p/q` rates.
 *
 * # Safety
 * `report` must be a live handle; `out` writable.
 */
enum FinclearStatus finclear_report_rates_csv(const struct FinclearReport *report, char **out);

/**
 * The report in the CLI's JSON schema.
 *
 * # Safety
 * `report` must be a live handle; `out` writable.
 */
enum FinclearStatus finclear_report_to_json(const struct FinclearReport *report, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINCLEAR_H */
