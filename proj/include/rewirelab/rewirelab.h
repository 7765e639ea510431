/* rewirelab C API.
 *
 * Objects are opaque handles created by rwl_*_create / rwl_*_load and
 * released with the matching rwl_*_free. Every fallible call returns an
 * rwl_status; on failure rwl_last_error() describes what went wrong (the
 * message is per thread and valid until the next failing call).
 * Strings returned through char** are owned by the caller and released with
 * rwl_string_free.
 */
#ifndef REWIRELAB_H
#define REWIRELAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RWL_API __declspec(dllexport)
#else
#define RWL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rwl_status {
    RWL_OK = 0,
    RWL_ERR_VALIDATION = 1,
    RWL_ERR_CONVERGENCE = 2,
    RWL_ERR_PARSE = 3,
    RWL_ERR_IO = 4,
    RWL_ERR_INTERNAL = 5
} rwl_status;

typedef struct rwl_graph rwl_graph;
typedef struct rwl_features rwl_features;
typedef struct rwl_labels rwl_labels;
typedef struct rwl_partition rwl_partition;
typedef struct rwl_delta rwl_delta;

RWL_API const char *rwl_version(void);
RWL_API const char *rwl_last_error(void);
RWL_API void rwl_string_free(char *s);

/* ---- graphs ---- */

/* Edges are given as parallel arrays; duplicates and reversed pairs collapse. */
RWL_API rwl_status rwl_graph_create(size_t num_nodes, const uint32_t *us, const uint32_t *vs,
                                    size_t num_edges, rwl_graph **out);
/* num_nodes of 0 means max id + 1. */
RWL_API rwl_status rwl_graph_load(const char *path, size_t num_nodes, rwl_graph **out);
RWL_API rwl_status rwl_graph_save(const rwl_graph *g, const char *path);
RWL_API void rwl_graph_free(rwl_graph *g);
RWL_API size_t rwl_graph_num_nodes(const rwl_graph *g);
RWL_API size_t rwl_graph_num_edges(const rwl_graph *g);
/* Writes num_edges entries into each buffer, sorted by (u, v) with u < v. */
RWL_API void rwl_graph_edges(const rwl_graph *g, uint32_t *us, uint32_t *vs);
RWL_API size_t rwl_graph_degree(const rwl_graph *g, uint32_t u);
RWL_API int rwl_graph_has_edge(const rwl_graph *g, uint32_t u, uint32_t v);
RWL_API int rwl_graph_equal(const rwl_graph *a, const rwl_graph *b);
RWL_API rwl_status rwl_graph_components(const rwl_graph *g, size_t *num_components);

/* ---- node data ---- */

RWL_API rwl_status rwl_features_create(size_t rows, size_t dim, const double *values, rwl_features **out);
RWL_API rwl_status rwl_features_load(const char *path, rwl_features **out);
RWL_API rwl_status rwl_features_save(const rwl_features *x, const char *path);
RWL_API void rwl_features_free(rwl_features *x);
RWL_API size_t rwl_features_rows(const rwl_features *x);
RWL_API size_t rwl_features_dim(const rwl_features *x);
RWL_API const double *rwl_features_data(const rwl_features *x);

RWL_API rwl_status rwl_labels_create(size_t n, const uint32_t *labels, rwl_labels **out);
RWL_API rwl_status rwl_labels_load(const char *path, rwl_labels **out);
RWL_API rwl_status rwl_labels_save(const rwl_labels *y, const char *path);
RWL_API void rwl_labels_free(rwl_labels *y);
RWL_API size_t rwl_labels_size(const rwl_labels *y);
RWL_API size_t rwl_labels_num_classes(const rwl_labels *y);
RWL_API const uint32_t *rwl_labels_data(const rwl_labels *y);

/* Ids must be 0-based and contiguous. */
RWL_API rwl_status rwl_partition_create(size_t n, const uint32_t *ids, rwl_partition **out);
RWL_API void rwl_partition_free(rwl_partition *p);
RWL_API size_t rwl_partition_size(const rwl_partition *p);
RWL_API size_t rwl_partition_num_communities(const rwl_partition *p);
RWL_API const uint32_t *rwl_partition_data(const rwl_partition *p);

/* ---- spectrum ---- */

typedef struct rwl_spectrum {
    double gap;
    double residual;
    int connected;
    size_t iterations;
    size_t components; /* components with at least one edge */
    size_t isolated;
} rwl_spectrum;

/* tol <= 0 and max_iter == 0 select the defaults. fiedler may be NULL,
 * otherwise it receives num_nodes values. On RWL_ERR_CONVERGENCE `out`
 * still holds the best estimate and its residual. */
RWL_API rwl_status rwl_spectral_gap(const rwl_graph *g, double tol, size_t max_iter, rwl_spectrum *out,
                                    double *fiedler);
RWL_API rwl_status rwl_expected_gap_two_block(size_t n, double p, double q, double *out);
RWL_API rwl_status rwl_expected_gap_k_block(size_t n, size_t k, double p, double q, double *out);
RWL_API rwl_status rwl_expected_gap_unequal(size_t n, size_t m, double p, double q, double *out);

/* ---- communities ---- */

RWL_API rwl_status rwl_louvain(const rwl_graph *g, uint64_t seed, double resolution, rwl_partition **out);
RWL_API rwl_status rwl_modularity(const rwl_graph *g, const rwl_partition *p, double resolution, double *out);

/* ---- rewiring ---- */

typedef enum rwl_method {
    RWL_HIGHER_COMMA = 0,
    RWL_LOWER_COMMA = 1,
    RWL_FEAST = 2,
    RWL_COMFY = 3,
    RWL_PROXY_MIN = 4,
    RWL_PROXY_MAX = 5
} rwl_method;

typedef enum rwl_op { RWL_ADD = 0, RWL_DEL = 1, RWL_ADD_DEL = 2 } rwl_op;

typedef struct rwl_rewire_request {
    int method; /* rwl_method */
    int op;     /* rwl_op */
    size_t k;
    uint64_t seed;
    double sample_ratio;
    int allow_isolation;
    size_t auto_sample_threshold;
    size_t refresh_iterations;
    size_t resolve_every;
    double tol;
    size_t max_iter;
} rwl_rewire_request;

RWL_API rwl_rewire_request rwl_rewire_request_default(void);
RWL_API rwl_status rwl_parse_method(const char *name, int *method);
RWL_API rwl_status rwl_parse_op(const char *name, int *op);

/* features / partition may be NULL when the method does not need them. */
RWL_API rwl_status rwl_rewire(const rwl_graph *g, const rwl_features *x, const rwl_partition *p,
                              const rwl_rewire_request *req, rwl_delta **out);
RWL_API void rwl_delta_free(rwl_delta *d);
RWL_API size_t rwl_delta_num_added(const rwl_delta *d);
RWL_API size_t rwl_delta_num_deleted(const rwl_delta *d);
RWL_API void rwl_delta_added(const rwl_delta *d, uint32_t *us, uint32_t *vs);
RWL_API void rwl_delta_deleted(const rwl_delta *d, uint32_t *us, uint32_t *vs);
RWL_API rwl_status rwl_delta_inverse(const rwl_delta *d, rwl_delta **out);
RWL_API rwl_status rwl_apply_delta(const rwl_graph *g, const rwl_delta *d, rwl_graph **out);
/* Report document seeded from the delta: method, params, seed, delta,
 * timings_ms and any warnings under metrics. */
RWL_API rwl_status rwl_delta_report(const rwl_delta *d, char **json);

/* ---- metrics ---- */

RWL_API rwl_status rwl_nmi(size_t n, const uint32_t *a, const uint32_t *b, double *out);
RWL_API rwl_status rwl_edge_homophily(const rwl_graph *g, const rwl_labels *y, double *out);
/* *defined is set to 0 when the value does not exist (no edges, or one class
 * carries all the degree). */
RWL_API rwl_status rwl_adjusted_homophily(const rwl_graph *g, const rwl_labels *y, double *out, int *defined);
RWL_API rwl_status rwl_mean_edge_similarity(const rwl_graph *g, const rwl_features *x, double *out);
/* Row-major [label same/diff][community same/diff] counts. */
RWL_API rwl_status rwl_alignment_matrix(const rwl_delta *d, const rwl_labels *y, const rwl_partition *p,
                                        size_t added[4], size_t deleted[4]);

/* ---- SBM laboratory ---- */

typedef struct rwl_sbm_params {
    size_t n;
    size_t blocks;
    double p;
    double q;
    double psi;
    double mu0;
    double sigma0;
} rwl_sbm_params;

typedef enum rwl_aggregation { RWL_SUM = 0, RWL_MEAN = 1 } rwl_aggregation;

typedef struct rwl_mc_result {
    double estimate;
    double stderr_;
    int stderr_defined;
    size_t trials;
} rwl_mc_result;

RWL_API rwl_sbm_params rwl_sbm_params_default(void);
/* Any output pointer may be NULL. */
RWL_API rwl_status rwl_sbm_generate(const rwl_sbm_params *params, uint64_t seed, rwl_graph **graph,
                                    rwl_features **features, rwl_labels **labels, rwl_partition **planted);
RWL_API double rwl_normal_cdf(double x);
RWL_API rwl_status rwl_theory_error_aligned(size_t n, double p, double q, double mu0, double sigma0, double *out);
RWL_API rwl_status rwl_theory_error(size_t n, double p, double q, double psi, double *out);
RWL_API rwl_status rwl_recoverability_threshold(size_t n, double q, double *out);
RWL_API rwl_status rwl_aggregate_classify(const rwl_graph *g, const rwl_features *x, int mode, rwl_labels **out);
RWL_API rwl_status rwl_misclassification(const rwl_labels *predicted, const rwl_labels *truth, double *out);
/* per_trial may be NULL, otherwise it receives `trials` values. */
RWL_API rwl_status rwl_monte_carlo_error(const rwl_sbm_params *params, int mode, size_t trials, uint64_t seed,
                                         rwl_mc_result *out, double *per_trial);

/* Grid as JSON: {"p":[..], "q":[..], "psi":[..], "methods":[..], "ops":[..],
 * "k":[..], "n":200, "mu0":1, "sigma0":1, "planted":false, "gap":true,
 * "nmi":true}. Either output may be NULL. */
RWL_API rwl_status rwl_sweep(const char *grid_json, int mode, size_t trials, uint64_t seed, char **csv,
                             char **json);

/* ---- reports ---- */

/* Checks the report schema and writes it (pretty-printed) to path. */
RWL_API rwl_status rwl_report_save(const char *json, const char *path);
/* Reads and validates a report, returning it re-serialized. */
RWL_API rwl_status rwl_report_load(const char *path, char **json);

#ifdef __cplusplus
}
#endif

#endif
