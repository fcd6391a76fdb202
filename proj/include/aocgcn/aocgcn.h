/* C interface to the occupation automation-risk pipeline. */
#ifndef AOCGCN_H
#define AOCGCN_H

#include <stddef.h>

#if defined(AOCGCN_BUILDING_LIBRARY)
#define AOC_API __attribute__((visibility("default")))
#else
#define AOC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum {
  AOC_OK = 0,
  AOC_ERR_USAGE = 1,
  AOC_ERR_DATA = 2,
  AOC_ERR_NUMERIC = 3
} aoc_status;

typedef struct aoc_config aoc_config;
typedef struct aoc_corpus aoc_corpus;
typedef struct aoc_graph aoc_graph;
typedef struct aoc_model aoc_model;

AOC_API const char* aoc_version(void);

/* Reason for the most recent failure on the calling thread, as one line:
 * "error=<Code> class=<usage|data|numeric> detail=<text>". Empty after success. */
AOC_API const char* aoc_last_error(void);

/* Functions that produce text copy at most `capacity` bytes (NUL-terminated)
 * into `buffer` and report the full length, excluding the NUL, in `*needed`.
 * `buffer` may be NULL when `capacity` is 0. */

/* ---- configuration ---- */
AOC_API aoc_status aoc_config_new(aoc_config** out);
AOC_API aoc_status aoc_config_load(const char* path, aoc_config** out);
/* key is "section.name", e.g. "gcn.hidden" */
AOC_API aoc_status aoc_config_set(aoc_config* config, const char* key, const char* value);
AOC_API aoc_status aoc_config_to_ini(const aoc_config* config, char* buffer, size_t capacity, size_t* needed);
AOC_API void aoc_config_free(aoc_config* config);

/* ---- stages ---- */
AOC_API size_t aoc_stage_count(void);
AOC_API const char* aoc_stage_name(size_t index);
AOC_API int aoc_is_stage(const char* name);
/* Runs one stage; the one-line summary (several lines for run-all) is copied out. */
AOC_API aoc_status aoc_stage_run(const aoc_config* config, const char* stage, char* summary, size_t capacity,
                                 size_t* needed);

/* ---- corpus ---- */
AOC_API aoc_status aoc_corpus_load(const char* data_dir, aoc_corpus** out);
AOC_API aoc_status aoc_corpus_counts(const aoc_corpus* corpus, size_t* occupations, size_t* skills, size_t* links,
                                     size_t* labels);
AOC_API void aoc_corpus_free(aoc_corpus* corpus);

/* ---- graph ---- */
/* Rebuilds the graph from the configured data and the embed stage output. */
AOC_API aoc_status aoc_graph_load(const aoc_config* config, aoc_graph** out);
AOC_API aoc_status aoc_graph_counts(const aoc_graph* graph, size_t* occupations, size_t* skills, size_t* edges);
/* Occupation identifier at graph row `index`. */
AOC_API const char* aoc_graph_occupation(const aoc_graph* graph, size_t index);
AOC_API void aoc_graph_free(aoc_graph* graph);

/* ---- model ---- */
AOC_API aoc_status aoc_model_load(const char* path, aoc_model** out);
/* Automated-class probability per graph occupation row. */
AOC_API aoc_status aoc_model_predict(const aoc_model* model, const aoc_graph* graph, double* probabilities,
                                     size_t capacity, size_t* count);
AOC_API void aoc_model_free(aoc_model* model);

#ifdef __cplusplus
}
#endif

#endif /* AOCGCN_H */
