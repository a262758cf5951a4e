/*
 * netsel C API.
 *
 * Opaque handles own their data; every *_free function accepts NULL. Functions
 * returning netsel_status leave their out-parameters untouched on failure and
 * record a message retrievable with netsel_last_error() on the calling thread.
 * Text results are UTF-8 and NUL-terminated.
 */
#ifndef NETSEL_NETSEL_H
#define NETSEL_NETSEL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NETSEL_BUILDING_LIBRARY)
#    define NETSEL_API __declspec(dllexport)
#  else
#    define NETSEL_API __declspec(dllimport)
#  endif
#else
#  define NETSEL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum netsel_status {
    NETSEL_OK = 0,
    NETSEL_E_INVALID_EDGE = 1,
    NETSEL_E_INVALID_NODE = 2,
    NETSEL_E_PARSE = 3,
    NETSEL_E_INVALID_SPEC = 4,
    NETSEL_E_INVALID_INPUT = 5,
    NETSEL_E_UNDEFINED_FEATURE = 6,
    NETSEL_E_UNDEFINED_BAYES_FACTOR = 7,
    NETSEL_E_UNDEFINED_POSTERIOR = 8,
    NETSEL_E_DEGENERATE_RATIO = 9,
    NETSEL_E_IO = 10,
    NETSEL_E_NULL_ARGUMENT = 11,
    NETSEL_E_INTERNAL = 12
} netsel_status;

typedef enum netsel_format { NETSEL_FORMAT_JSON = 0, NETSEL_FORMAT_CSV = 1 } netsel_format;

typedef enum netsel_decision {
    NETSEL_DECISION_INDETERMINATE = 0,
    NETSEL_DECISION_MODEL_1 = 1,
    NETSEL_DECISION_MODEL_2 = 2
} netsel_decision;

typedef struct netsel_graph netsel_graph;
typedef struct netsel_graph_list netsel_graph_list;
typedef struct netsel_text netsel_text;
typedef struct netsel_report netsel_report;

typedef struct netsel_feature_value {
    int is_discrete;     /* 1 for integer-valued features */
    int64_t discrete;    /* valid when is_discrete */
    double continuous;   /* always set; equals discrete when is_discrete */
} netsel_feature_value;

/* Library ----------------------------------------------------------------- */

NETSEL_API const char* netsel_version(void);
NETSEL_API const char* netsel_status_name(netsel_status status);
NETSEL_API const char* netsel_last_error(void);

/* Process exit code for a status: 0 success, 3 statistically indeterminate
 * result (undefined Bayes factor or posterior, degenerate loss ratio),
 * 1 internal failure, 2 everything else. */
NETSEL_API int netsel_exit_code(netsel_status status);

/* Engine seed used for draw `index` of `stream` under `master` (stream 0 is
 * the one netsel_generate uses). */
NETSEL_API uint64_t netsel_derive_seed(uint64_t master, uint64_t stream, uint64_t index);

/* Text buffers -------------------------------------------------------------- */

NETSEL_API const char* netsel_text_data(const netsel_text* text);
NETSEL_API size_t netsel_text_size(const netsel_text* text);
NETSEL_API void netsel_text_free(netsel_text* text);

/* Graphs ------------------------------------------------------------------- */

/* edge_pairs holds 2 * edge_count node ids (u0, v0, u1, v1, ...). */
NETSEL_API netsel_status netsel_graph_create(size_t node_count, const uint32_t* edge_pairs,
                                             size_t edge_count, netsel_graph** out);
/* Strict edge-list format with a required "# n=<N>" header. */
NETSEL_API netsel_status netsel_graph_read_edge_list(const char* text, size_t length,
                                                     netsel_graph** out);
/* Arbitrary labels remapped to dense ids; mapping is "id<TAB>label" lines. */
NETSEL_API netsel_status netsel_graph_read_labeled_edge_list(const char* text, size_t length,
                                                             netsel_graph** out,
                                                             netsel_text** mapping);
NETSEL_API netsel_status netsel_graph_write_edge_list(const netsel_graph* graph, netsel_text** out);
NETSEL_API void netsel_graph_free(netsel_graph* graph);

NETSEL_API size_t netsel_graph_node_count(const netsel_graph* graph);
NETSEL_API size_t netsel_graph_edge_count(const netsel_graph* graph);
/* *present_after (optional) receives 1 if the edge exists after the toggle. */
NETSEL_API netsel_status netsel_graph_toggle_edge(netsel_graph* graph, uint32_t u, uint32_t v,
                                                  int* present_after);
/* Writes node_count degrees; capacity must be at least node_count. */
NETSEL_API netsel_status netsel_graph_degrees(const netsel_graph* graph, size_t* out,
                                              size_t capacity);

/* Graph lists ------------------------------------------------------------- */

NETSEL_API size_t netsel_graph_list_size(const netsel_graph_list* list);
/* Borrowed pointer, valid until the list is freed. */
NETSEL_API const netsel_graph* netsel_graph_list_get(const netsel_graph_list* list, size_t index);
NETSEL_API void netsel_graph_list_free(netsel_graph_list* list);

/* Model specs and generation ------------------------------------------------ */

/* Parses and validates a model spec; *canonical (optional) receives the
 * normalized JSON. */
NETSEL_API netsel_status netsel_spec_validate(const char* spec_json, netsel_text** canonical);
/* count prior-predictive draws; output independent of threads (0 = all cores). */
NETSEL_API netsel_status netsel_generate(const char* spec_json, size_t count, uint64_t seed,
                                         unsigned threads, netsel_graph_list** out);

/* Features --------------------------------------------------------------- */

/* feature is a token such as "degree_entropy" or "block_count:k_max=12". */
NETSEL_API netsel_status netsel_feature_extract(const netsel_graph* graph, const char* feature,
                                                netsel_feature_value* out);
/* One row per comma-separated feature; undefined features yield a null value
 * (JSON null / empty CSV field) and the call still succeeds. */
NETSEL_API netsel_status netsel_features_table(const netsel_graph* graph, const char* features,
                                               netsel_format format, netsel_text** out);

/* Sharding and consensus ----------------------------------------------------- */

NETSEL_API netsel_status netsel_shard_cells(const netsel_graph* graph, size_t cell_size,
                                            netsel_graph_list** out);
/* draws is shard-major: draws[s * draws_per_shard + t]; out receives
 * draws_per_shard merged values. */
NETSEL_API netsel_status netsel_consensus_merge(const double* draws, size_t shards,
                                                size_t draws_per_shard, double* out);
/* CSV "feature,draw,value,shards_used,shards_total" of consensus-merged
 * shard features over the graphs of a list. */
NETSEL_API netsel_status netsel_consensus_features(const netsel_graph_list* graphs,
                                                   size_t cell_size, const char* features,
                                                   netsel_text** out);

/* Workflows ---------------------------------------------------------------- */

/* config_json: {"model_1", "model_2", "features", "loss", "samples", "seed",
 * "threads", "model_priors", "independent_streams", "pseudo_count"}. */
NETSEL_API netsel_status netsel_compare(const netsel_graph* data, const char* config_json,
                                        netsel_report** out);
NETSEL_API netsel_status netsel_report_render(const netsel_report* report, netsel_format format,
                                              netsel_text** out);
NETSEL_API netsel_decision netsel_report_decision(const netsel_report* report);
NETSEL_API double netsel_report_combined_ratio(const netsel_report* report);
NETSEL_API double netsel_report_posterior_odds(const netsel_report* report);
NETSEL_API void netsel_report_free(netsel_report* report);
/* CSV "feature,model,x,density" for both models of a compare config. */
NETSEL_API netsel_status netsel_compare_plot_data(const netsel_graph* data, const char* config_json,
                                                  netsel_text** out);

/* config_json: {"models", "ranges": [{"feature", "lo", "hi"}], "samples",
 * "seed", "threads"}. */
NETSEL_API netsel_status netsel_elicit(const char* config_json, netsel_format format,
                                       netsel_text** out);
/* config_json: {"model" (one grid prior), "features", "samples", "seed",
 * "threads"}; posterior over the grid values given the data graph. */
NETSEL_API netsel_status netsel_infer(const netsel_graph* data, const char* config_json,
                                      netsel_format format, netsel_text** out);

/* Study config with "grids", "windows", "rows", "losses", "samples", "seed". */
NETSEL_API netsel_status netsel_simulate(const char* study_json, netsel_format format,
                                         netsel_text** out);

#ifdef __cplusplus
}
#endif

#endif /* NETSEL_NETSEL_H */
