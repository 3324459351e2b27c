/*
 * rtfm.h - C interface to the personalized review-ranking engine.
 *
 * All objects are opaque handles created by a *_new / *_load / *_build call
 * and released with the matching *_free. Every fallible function returns an
 * rtfm_status; on failure rtfm_last_error() describes the problem for the
 * calling thread. Strings returned through `char**` out-parameters are owned
 * by the caller and must be released with rtfm_string_free().
 *
 * Handles are not internally synchronized. Read-only use of one corpus, store
 * or profile from several threads is safe; mutation (config setters) is not.
 */
#ifndef RTFM_H
#define RTFM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RTFM_BUILDING_LIBRARY)
#    define RTFM_API __declspec(dllexport)
#  else
#    define RTFM_API __declspec(dllimport)
#  endif
#else
#  define RTFM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rtfm_status {
    RTFM_OK = 0,
    RTFM_E_INVALID_ARGUMENT = 1,
    RTFM_E_IO = 2,
    RTFM_E_PARSE = 3,
    RTFM_E_SCHEMA = 4,
    RTFM_E_NOT_FOUND = 5,
    RTFM_E_FORMAT = 6,
    RTFM_E_DOMAIN = 7,
    RTFM_E_INTERNAL = 99
} rtfm_status;

typedef enum rtfm_pairing {
    RTFM_PAIR_FIXED_USER = 0,
    RTFM_PAIR_CROSS = 1
} rtfm_pairing;

typedef enum rtfm_rank_method {
    RTFM_RANK_PERSONALIZED = 0,
    RTFM_RANK_DEFAULT = 1
} rtfm_rank_method;

typedef struct rtfm_config rtfm_config;
typedef struct rtfm_corpus rtfm_corpus;
typedef struct rtfm_store rtfm_store;
typedef struct rtfm_profile rtfm_profile;

RTFM_API const char* rtfm_version(void);
RTFM_API const char* rtfm_status_string(rtfm_status status);
/* Message of the last failed call on this thread; "" if none. */
RTFM_API const char* rtfm_last_error(void);
RTFM_API void rtfm_string_free(char* s);

/* ---- run configuration ------------------------------------------------ */

RTFM_API rtfm_status rtfm_config_new(rtfm_config** out);
RTFM_API rtfm_status rtfm_config_load(const char* path, rtfm_config** out);
RTFM_API rtfm_status rtfm_config_parse(const char* ini_text, rtfm_config** out);
RTFM_API void rtfm_config_free(rtfm_config* config);
/* key is "section.name", e.g. "ranker.k1". */
RTFM_API rtfm_status rtfm_config_set(rtfm_config* config, const char* key, const char* value);
RTFM_API rtfm_status rtfm_config_get(const rtfm_config* config, const char* key, char** value);
RTFM_API rtfm_status rtfm_config_validate(const rtfm_config* config);
RTFM_API rtfm_status rtfm_config_to_ini(const rtfm_config* config, char** ini_text);
RTFM_API rtfm_status rtfm_config_hash(const rtfm_config* config, char** hash);

/* ---- corpus ------------------------------------------------------------ */

/* Honors dataset.strict. In lenient mode `skipped` (optional) receives the
 * number of rejected lines. */
RTFM_API rtfm_status rtfm_corpus_load(const char* path, const rtfm_config* config,
                                      rtfm_corpus** out, size_t* skipped);
RTFM_API void rtfm_corpus_free(rtfm_corpus* corpus);
RTFM_API size_t rtfm_corpus_size(const rtfm_corpus* corpus);
/* Distinct reviewer ids in ascending order; pointers live as long as the corpus. */
RTFM_API size_t rtfm_corpus_user_count(const rtfm_corpus* corpus);
RTFM_API rtfm_status rtfm_corpus_user_id(const rtfm_corpus* corpus, size_t i, const char** user_id);
RTFM_API int rtfm_corpus_has_user(const rtfm_corpus* corpus, const char* user_id);
/* Review text at a corpus position; the pointer lives as long as the corpus.
 * RTFM_E_NOT_FOUND when position is out of range. */
RTFM_API rtfm_status rtfm_corpus_review_text(const rtfm_corpus* corpus, size_t position,
                                             const char** text);
/* DatasetStats as JSON. */
RTFM_API rtfm_status rtfm_corpus_stats_json(const rtfm_corpus* corpus, const rtfm_config* config,
                                            char** json);
/* Runs the configured text pipeline; JSON array of terms. */
RTFM_API rtfm_status rtfm_pipeline_json(const rtfm_config* config, const char* text, char** json);

/* ---- index store ------------------------------------------------------- */

RTFM_API rtfm_status rtfm_store_build(const rtfm_corpus* corpus, const rtfm_config* config,
                                      rtfm_store** out);
RTFM_API rtfm_status rtfm_store_save(const rtfm_store* store, const char* path);
RTFM_API rtfm_status rtfm_store_load(const char* path, rtfm_store** out);
RTFM_API void rtfm_store_free(rtfm_store* store);
RTFM_API size_t rtfm_store_product_count(const rtfm_store* store);
/* i-th asin in ascending order; pointer lives as long as the store.
 * RTFM_E_NOT_FOUND when i is out of range. */
RTFM_API rtfm_status rtfm_store_product_asin(const rtfm_store* store, size_t i, const char** asin);
RTFM_API int rtfm_store_contains(const rtfm_store* store, const char* asin);
RTFM_API rtfm_status rtfm_store_config_hash(const rtfm_store* store, const char** hash);
RTFM_API rtfm_status rtfm_store_to_json(const rtfm_store* store, char** json);

/* ---- profiles ---------------------------------------------------------- */

/* Simulated activity for one user as an event-log JSON document. */
RTFM_API rtfm_status rtfm_simulate_events(const rtfm_corpus* corpus, const rtfm_config* config,
                                          const char* user_id, char** events_json);
/* Replays an event log against the store. */
RTFM_API rtfm_status rtfm_profile_from_events(const rtfm_store* store, const rtfm_config* config,
                                              const char* events_json, rtfm_profile** out);
RTFM_API rtfm_status rtfm_profile_parse(const char* profile_json, rtfm_profile** out);
RTFM_API rtfm_status rtfm_profile_load(const char* path, rtfm_profile** out);
RTFM_API void rtfm_profile_free(rtfm_profile* profile);
RTFM_API rtfm_status rtfm_profile_user_id(const rtfm_profile* profile, const char** user_id);
/* Profile JSON stamped with the config hash (config may be NULL). */
RTFM_API rtfm_status rtfm_profile_to_json(const rtfm_profile* profile, const rtfm_config* config,
                                          char** json);
/* JSON array of up to k query terms. */
RTFM_API rtfm_status rtfm_profile_top_k(const rtfm_profile* profile, size_t k, char** json);

/* ---- ranking, evaluation, recommendation ------------------------------- */

/* Ranking JSON {asin, method, config_hash, entries:[...]}. Both methods
 * carry the profile's BM25 scores, so the orderings are directly comparable.
 * `empty_query` (optional) is set to 1 when the profile yields no query terms. */
RTFM_API rtfm_status rtfm_rank_json(const rtfm_store* store, const rtfm_profile* profile,
                                    const rtfm_config* config, const char* asin,
                                    rtfm_rank_method method, char** json, int* empty_query);

/* Batch RSS evaluation. Outputs the CSV report and the JSON summary. */
RTFM_API rtfm_status rtfm_evaluate_batch(const rtfm_store* store,
                                         const rtfm_profile* const* profiles, size_t n_profiles,
                                         const char* const* asins, size_t n_asins,
                                         const rtfm_config* config, rtfm_pairing pairing,
                                         char** csv, char** summary_json);

/* Recommendation JSON; `scorable` (optional) is 0 when no top-k term occurs
 * in the product's reviews, and `score` (optional) receives the score. */
RTFM_API rtfm_status rtfm_recommend_json(const rtfm_store* store, const rtfm_profile* profile,
                                         const rtfm_config* config, const char* asin, char** json,
                                         int* scorable, double* score);

/* ---- scalar metrics ---------------------------------------------------- */

RTFM_API rtfm_status rtfm_rss(const double* scores, size_t n, double* out);
RTFM_API rtfm_status rtfm_percent_increase(double rss_default, double rss_personalized, double* out);
RTFM_API rtfm_status rtfm_precision_at_k(const int64_t* candidate, const int64_t* reference,
                                         size_t n, size_t k, double* out);
RTFM_API rtfm_status rtfm_dwell_weight(const rtfm_config* config, double minutes, double* out);

#ifdef __cplusplus
}
#endif

#endif /* RTFM_H */
