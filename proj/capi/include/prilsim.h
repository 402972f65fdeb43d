/* C interface to the TSCH link simulator.
 *
 * All functions return a prilsim_status; out parameters are written only on
 * PRILSIM_OK. A human-readable message for the most recent failure on the
 * calling thread is available through prilsim_last_error().
 */
#ifndef PRILSIM_H
#define PRILSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prilsim_status {
    PRILSIM_OK = 0,
    PRILSIM_ERR_INVALID_ARGUMENT = 1,
    PRILSIM_ERR_BAD_KEY = 2,
    PRILSIM_ERR_PARSE = 3,
    PRILSIM_ERR_IO = 4,
    PRILSIM_ERR_BUFFER_TOO_SMALL = 5,
    PRILSIM_ERR_INTERNAL = 6,
} prilsim_status;

typedef struct prilsim_config prilsim_config;
typedef struct prilsim_result prilsim_result;

const char* prilsim_version(void);

/* Message for the last failing call on this thread; empty string if none. */
const char* prilsim_last_error(void);

/* --- configuration ------------------------------------------------------ */

prilsim_status prilsim_config_create(prilsim_config** out);
prilsim_status prilsim_config_clone(const prilsim_config* cfg, prilsim_config** out);
void prilsim_config_destroy(prilsim_config* cfg);

/* Keys and value syntax match the `key = value` config-file format. */
prilsim_status prilsim_config_set(prilsim_config* cfg, const char* key, const char* value);

/* Copies the value into buf (NUL terminated). *len carries the buffer
 * capacity in and the full value length (excluding NUL) out; on
 * PRILSIM_ERR_BUFFER_TOO_SMALL only *len is updated. */
prilsim_status prilsim_config_get(const prilsim_config* cfg, const char* key, char* buf,
                                  size_t* len);

prilsim_status prilsim_config_load_file(prilsim_config* cfg, const char* path);

/* --- simulation --------------------------------------------------------- */

prilsim_status prilsim_run(const prilsim_config* cfg, prilsim_result** out);
void prilsim_result_destroy(prilsim_result* result);

/* Scalar metrics, e.g. "p_total_uW", "useless_attempts", "lat_p99_s".
 * Every CSV column except `strategy` is available; counters are returned as
 * exact integer-valued doubles, latency fields are NaN when no packet was
 * delivered. */
prilsim_status prilsim_result_metric(const prilsim_result* result, const char* name,
                                     double* out);

/* Same buffer protocol as prilsim_config_get. */
prilsim_status prilsim_result_csv_row(const prilsim_result* result, char* buf, size_t* len);
prilsim_status prilsim_result_summary(const prilsim_result* result, char* buf, size_t* len);
prilsim_status prilsim_csv_header(char* buf, size_t* len);

/* --- ACK loss estimation ------------------------------------------------ */

/* Fixed-point estimate of the ACK loss probability from ping statistics. */
prilsim_status prilsim_estimate_eps_a(double eps_f, uint64_t n_dup, uint64_t n_ping,
                                      int n_tries, int iterations, double* out);

/* Full key = value report with the iteration trace (buffer protocol as
 * above). */
prilsim_status prilsim_estimate_report(double eps_f, uint64_t n_dup, uint64_t n_ping,
                                       int n_tries, int iterations, char* buf, size_t* len);

/* Reads a ping log from `path` and returns the DUP! count and request count. */
prilsim_status prilsim_parse_ping_log(const char* path, uint64_t* n_dup, uint64_t* n_ping);

/* --- self check --------------------------------------------------------- */

/* Compares Monte Carlo engine runs against exhaustive enumeration for a
 * small single-packet scenario. *pass is 1 on agreement, 0 otherwise; the
 * report uses the usual buffer protocol and may be requested with buf ==
 * NULL to query the length only. */
prilsim_status prilsim_oracle_check(const char* strategy, double eps_f, double eps_a,
                                    int n_tries, int horizon, uint64_t trials,
                                    uint64_t base_seed, int* pass, char* buf, size_t* len);

#ifdef __cplusplus
}
#endif

#endif /* PRILSIM_H */
