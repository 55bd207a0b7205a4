/* tiltedwalk: exact enumeration and tilted-series analysis of self-avoiding
 * and repulsive walks on nonunimodular transitive graphs.
 *
 * C API over an opaque-handle core. Every function returns a tw_status;
 * results go through out-parameters. Strings returned through char** are
 * heap-allocated and must be released with tw_string_free. On error,
 * tw_last_error() carries a thread-local message.
 */
#ifndef TILTEDWALK_H
#define TILTEDWALK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TW_API __declspec(dllexport)
#else
#define TW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tw_status {
  TW_OK = 0,
  TW_ERR_USAGE = 1,
  TW_ERR_BALL_TOO_SMALL = 2,
  TW_ERR_LIMIT = 3,
  TW_ERR_UNSUPPORTED = 4,
  TW_ERR_IO = 5,
  TW_ERR_DIVERGED = 6,
  TW_ERR_INTERNAL = 7
} tw_status;

typedef struct tw_model tw_model;
typedef struct tw_tables tw_tables;

TW_API const char* tw_version(void);
TW_API const char* tw_last_error(void);
TW_API void tw_string_free(char* s);

/* ---- graph models --------------------------------------------------------
 * descriptors: "end-fixed-tree:k=4", "oriented-tree-112",
 *              "product-tree-zd:k=3,d=1"
 */
TW_API tw_status tw_model_create(const char* descriptor, tw_model** out);
TW_API void tw_model_free(tw_model* m);
TW_API tw_status tw_model_seal(tw_model* m, int radius);
TW_API tw_status tw_model_vertex_count(const tw_model* m, uint64_t* out);
TW_API tw_status tw_model_degree(const tw_model* m, int* out);
TW_API tw_status tw_model_wbase(const tw_model* m, uint64_t* out);
TW_API tw_status tw_model_tau(const tw_model* m, double* out);

typedef struct tw_neighbor {
  uint32_t id;
  int height_inc; /* units of tau */
  char label[16];
} tw_neighbor;

TW_API tw_status tw_model_neighbors(tw_model* m, uint32_t v, tw_neighbor* buf,
                                    int cap, int* out_n);
TW_API tw_status tw_model_height(const tw_model* m, uint32_t v, int* out);
TW_API tw_status tw_model_modular_ratio(const tw_model* m, uint32_t u, uint32_t v,
                                        double* out);
TW_API tw_status tw_model_graph_distance(const tw_model* m, uint32_t u, uint32_t v,
                                         int* out);

/* ---- weight functions ----------------------------------------------------
 * descriptors: "saw", "weakly-saw:g=0.5", "anisotropic:a=1,b=0",
 *              "at-most-twice", "prime-gap", "tree-span", "broken-super"
 * JSON report of the randomized repulsivity / zero-range / reversibility
 * suite; violations list the offending paths verbatim.
 */
TW_API tw_status tw_weight_properties(const char* model_desc, const char* weight_desc,
                                      int trials, int max_len, uint64_t seed,
                                      char** json_out);

/* ---- exact enumeration --------------------------------------------------- */
TW_API tw_status tw_enumerate(const char* model_desc, const char* weight_desc,
                              int nmax, int threads, int want_two_point,
                              const char* cache_dir_or_null, tw_tables** out,
                              int* cache_hit_or_null);
TW_API void tw_tables_free(tw_tables* t);
TW_API tw_status tw_tables_nmax(const tw_tables* t, int* out);
/* kind: "N", "a", "d", "h", "r"; count as a decimal string */
TW_API tw_status tw_tables_count(const tw_tables* t, const char* kind, int n, int m,
                                 int mark, char** decimal_out);
TW_API tw_status tw_tables_csv(const tw_tables* t, char** csv_out);
TW_API tw_status tw_tables_write(const tw_tables* t, const char* path);
TW_API tw_status tw_tables_read(const char* path, tw_tables** out);
TW_API tw_status tw_tilted_z(const tw_tables* t, double lambda, int n, double* out);

/* transfer fast path (tree models, SAW); full tables up to nmax <= 1024 */
TW_API tw_status tw_transfer_tables(const char* model_desc, int nmax, tw_tables** out);

/* ---- tilted analysis ------------------------------------------------------ */
TW_API tw_status tw_alpha_upper(const tw_tables* t, double z, int n, double* out);
TW_API tw_status tw_beta_lower(const tw_tables* t, double z, int n, double* raw_out,
                               double* tail_corrected_out, int* tail_finite_out);
/* bracket as JSON: {lambda, z_lo, z_hi, n_lo, n_hi, beta_at_lo, alpha_at_hi,
 * tol_met, beta_rigorous, flags} */
TW_API tw_status tw_zc_bracket(const char* model_desc, const char* weight_desc,
                               const tw_tables* tables_or_null, double lambda,
                               int nmax, double tol, char** json_out);
TW_API tw_status tw_verify_identities(const tw_tables* t, char** json_out);

/* one-call verification suite: exact identities, property suite, tree
 * closed-form agreement, DFS/transfer cross-check; exit-style verdicts */
TW_API tw_status tw_verify_run(const char* model_desc, const char* weight_desc,
                               int nmax, int threads, uint64_t seed, char** json_out);

/* full analyze pipeline: brackets over a lambda grid plus identity and
 * inequality reports at the z grid; also emits the brackets CSV */
TW_API tw_status tw_analyze(const char* model_desc, const char* weight_desc, int nmax,
                            int threads, const char* lambda_grid_csv,
                            const char* z_grid_csv, double tol,
                            const char* cache_dir_or_null, char** json_out,
                            char** brackets_csv_out);

/* ---- closed forms ---------------------------------------------------------- */
TW_API tw_status tw_closed_form_chi(const char* model_desc, double z, double lambda,
                                    double* out);
TW_API tw_status tw_closed_form_zc(const char* model_desc, double lambda, double* out);
TW_API tw_status tw_closed_form_alpha(const char* model_desc, double z, double* out);
/* CSV "n,coeff" of the chi Taylor coefficients; exact decimal integers at
 * lambda in {0,1}, doubles otherwise */
TW_API tw_status tw_closed_form_coeffs(const char* model_desc, double lambda, int count,
                                       char** csv_out);
/* which printed numerator matches exact enumeration on the oriented tree */
TW_API tw_status tw_oriented_numerator_verdict(int nmax, char** json_out);

/* ---- sampling --------------------------------------------------------------
 * method: "exact" (suffix counts on trees, enumerated endpoint law otherwise)
 *         or "rosenbluth"
 */
TW_API tw_status tw_sample(const char* model_desc, const char* weight_desc,
                           double lambda, int n, int64_t count, const char* method,
                           uint64_t seed, int threads, char** csv_out,
                           char** drift_json_out);

#ifdef __cplusplus
}
#endif

#endif /* TILTEDWALK_H */
