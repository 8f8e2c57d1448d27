/* Copyright 2026 The nlprov Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to nlprov. Requests and results are JSON text. Strings
 * returned through out parameters are owned by the caller and released with
 * nlprov_free. On failure the out string is set to NULL and nlprov_last_error
 * describes the failure for the calling thread.
 */
#ifndef NLPROV_NLPROV_H_
#define NLPROV_NLPROV_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NLPROV_API __declspec(dllexport)
#else
#define NLPROV_API __attribute__((visibility("default")))
#endif

typedef enum nlprov_status {
  NLPROV_OK = 0,
  NLPROV_MALFORMED_TREE,
  NLPROV_ARITY_MISMATCH,
  NLPROV_TYPE_MISMATCH,
  NLPROV_INVALID_PARAMS,
  NLPROV_UNKNOWN_RELATION,
  NLPROV_UNMAPPED_HEAD,
  NLPROV_LEAF_NOT_FOUND,
  NLPROV_TEMPLATE_MISMATCH,
  NLPROV_UNHANDLED_SHAPE,
  NLPROV_NO_SIBLING_MAPPING,
  NLPROV_LOOKUP_FAILED,
  NLPROV_RANGE_ON_NON_NUMERIC,
  NLPROV_PARSE_ERROR,
  NLPROV_INVALID_QUERY,
  NLPROV_INVALID_MAPPING,
  NLPROV_IO_ERROR,
  NLPROV_NOT_FOUND,
  NLPROV_INTERNAL
} nlprov_status;

typedef struct nlprov_service nlprov_service;

NLPROV_API const char* nlprov_version(void);
NLPROV_API const char* nlprov_status_name(nlprov_status s);
/* Message of the last failed call on this thread, "" when none. */
NLPROV_API const char* nlprov_last_error(void);
NLPROV_API void nlprov_free(char* s);

/* data_dir may be NULL for an empty service; otherwise every
 * <data_dir>/fixtures/<name>/fixture.json is loaded. */
NLPROV_API nlprov_status nlprov_service_open(const char* data_dir, nlprov_service** out);
NLPROV_API void nlprov_service_close(nlprov_service* svc);
/* Loads one fixture directory; its name is written to name_out. */
NLPROV_API nlprov_status nlprov_service_add_fixture(nlprov_service* svc, const char* dir, char** name_out);

NLPROV_API nlprov_status nlprov_fixtures(nlprov_service* svc, char** json_out);
/* Full answer bundles for a request such as
 * {"fixture":"mini-mas","query":"running","summarize":"authors"}. */
NLPROV_API nlprov_status nlprov_run(nlprov_service* svc, const char* request_json, char** json_out);
/* Keeps the evaluated question and returns answer ids. */
NLPROV_API nlprov_status nlprov_submit(nlprov_service* svc, const char* request_json, char** json_out);
/* mode is single, factorized or summarized; level may be NULL. */
NLPROV_API nlprov_status nlprov_explain(nlprov_service* svc, const char* answer_id, const char* mode,
                                        const char* level, char** json_out);
/* Golden cases of a loaded fixture; *failures_out counts mismatches. */
NLPROV_API nlprov_status nlprov_check(nlprov_service* svc, const char* fixture, char** json_out,
                                      int* failures_out);

/* Synthetic scalability run. */
NLPROV_API nlprov_status nlprov_bench(int assignments, int unique_values, int vars, int trials,
                                      unsigned long long seed, char** json_out);

/* HTTP front end. nlprov_serve blocks; nlprov_start returns the bound port
 * in *port_out (pass port 0 to pick a free one) and serves in the background. */
NLPROV_API nlprov_status nlprov_serve(nlprov_service* svc, const char* host, int port);
NLPROV_API nlprov_status nlprov_start(nlprov_service* svc, const char* host, int port, int* port_out);
NLPROV_API void nlprov_stop(nlprov_service* svc);

#ifdef __cplusplus
}
#endif

#endif /* NLPROV_NLPROV_H_ */
