/* C interface to the cvxid library: convex-criterion identification of
 * linear stochastic systems, batch and recursive, plus the Monte Carlo
 * benchmark harness.
 *
 * All functions return a cvxid_status; on failure cvxid_last_error() holds a
 * thread-local description. Strings produced by the library are released
 * with cvxid_string_free, datasets with cvxid_dataset_free.
 */
#ifndef CVXID_H
#define CVXID_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvxid_status {
  CVXID_OK = 0,
  CVXID_ERR_ARGUMENT = 1, /* dimension mismatch, bad call arguments */
  CVXID_ERR_CONFIG = 2,   /* invalid loss/schedule/kernel/experiment config */
  CVXID_ERR_DATA = 3,     /* malformed CSV, non-finite observations */
  CVXID_ERR_NUMERIC = 4,  /* singular or ill-conditioned systems */
  CVXID_ERR_IO = 5,       /* file read/write failures */
  CVXID_ERR_INTERNAL = 6
} cvxid_status;

const char* cvxid_version(void);

/* Thread-local message for the last failing call on this thread. */
const char* cvxid_last_error(void);

void cvxid_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

typedef struct cvxid_dataset cvxid_dataset;

/* Rows of (x_k, y_{k+1}); x row-major with `rows * dim` entries. */
cvxid_status cvxid_dataset_create(int32_t dim, int64_t rows, const double* x,
                                  const double* y, cvxid_dataset** out);
cvxid_status cvxid_dataset_read_csv(const char* path, cvxid_dataset** out);
cvxid_status cvxid_dataset_write_csv(const cvxid_dataset* data, const char* path);
int32_t cvxid_dataset_dim(const cvxid_dataset* data);
int64_t cvxid_dataset_rows(const cvxid_dataset* data);
cvxid_status cvxid_dataset_get_row(const cvxid_dataset* data, int64_t row,
                                   double* x_out, double* y_out);
void cvxid_dataset_free(cvxid_dataset* data);

/* ---- losses ------------------------------------------------------------ */

/* Loss strings: "l1", "l2", "l<r>", "huber:<delta>", "logcosh",
 * "quantile:<gamma>". */
cvxid_status cvxid_loss_value(const char* loss, double t, double* out);
cvxid_status cvxid_loss_subgradient(const char* loss, double t, double* out);
cvxid_status cvxid_loss_growth_exponent(const char* loss, double* out);

/* ---- operations (JSON in, JSON out) ------------------------------------ */

/* config: {"a":[a1,a2],"b":[b1,b2],"input":{...},"noise":{...},
 *          "n_samples":N,"seed":S,"burn_in":B,
 *          "outliers":{"fraction":f,"alpha":a,"n":n}?, "raw_out":"path"?}
 * info_json (optional out): {"theta_star":[...],"rows":N-2,"dim":4} */
cvxid_status cvxid_simulate(const char* config_json, cvxid_dataset** out_data,
                            char** info_json);

/* request: {"loss":"l1","mode":"batch"|"recursive","theta_star":[...]?,
 *           "schedule":"powerlaw"|"geometric"?,"a0":1,"m0":10,"rfac":2,
 *           "record_every":0,"trajectory_csv":"path"?,
 *           "max_iters":10000,"tol":1e-8}
 * result: {"method","loss","theta_hat","error","wall_time_s","config_echo",
 *          batch: "final_risk","iters","converged";
 *          recursive: "sigma_final","truncations"} */
cvxid_status cvxid_fit(const cvxid_dataset* data, const char* request_json,
                       char** result_json);

/* request: {"kernel":"tc|dc|ss|identity","grid":{"c":[...],"decay":[...],
 *           "corr":[...],"reg_lambda":[...],"holdout_fraction":0.2},
 *           "theta_star":[...]?}
 * result: {"method":"regls","kernel","theta_hat","chosen":{...},
 *          "holdout_mse","error","wall_time_s","config_echo"} */
cvxid_status cvxid_regls(const cvxid_dataset* data, const char* request_json,
                         char** result_json);

/* experiment_json: {"arx":{...},"outliers":{...}?,"methods":[...],
 *                   "n_runs","n_train","n_validate","master_seed",
 *                   "record_every","measure_time"}
 * overrides_json (optional): {"n_runs":N?,"workers":W?,"trajectories_dir":D?}
 * report_json out: {"schema_version","theta_star","config_echo","methods",
 *                   "runs","summary"} */
cvxid_status cvxid_bench(const char* experiment_json, const char* overrides_json,
                         char** report_json);

/* Box-plot statistics table from a report; format "csv" or "json". */
cvxid_status cvxid_report_render(const char* report_json, const char* format,
                                 char** out_text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CVXID_H */
