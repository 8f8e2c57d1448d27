// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/nlprov.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include <json.hpp>

#include "nlprov/error.hpp"
#include "nlprov/pipeline.hpp"
#include "nlprov/service.hpp"

struct nlprov_service {
  nlprov::Service impl;
};

namespace {

thread_local std::string g_last_error;

nlprov_status to_status(nlprov::Errc c) {
  return static_cast<nlprov_status>(static_cast<int>(c) + 1);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
nlprov_status guard(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return NLPROV_OK;
  } catch (const nlprov::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("PARSE_ERROR: ") + e.what();
    return NLPROV_PARSE_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NLPROV_INTERNAL;
  }
}

template <typename F>
nlprov_status emit(char** out, F&& fn) {
  if (!out) {
    g_last_error = "INVALID_PARAMS: null output pointer";
    return NLPROV_INVALID_PARAMS;
  }
  *out = nullptr;
  return guard([&] {
    char* s = dup(fn());
    if (!s) throw std::bad_alloc();
    *out = s;
  });
}

void need(const void* p, const char* what) {
  if (!p) throw nlprov::Error(nlprov::Errc::InvalidParams, std::string("null ") + what);
}

}  // namespace

extern "C" {

const char* nlprov_version(void) { return "0.1.0"; }

const char* nlprov_status_name(nlprov_status s) {
  if (s == NLPROV_OK) return "OK";
  if (s == NLPROV_INTERNAL) return "INTERNAL";
  if (s > NLPROV_OK && s < NLPROV_INTERNAL) return nlprov::errc_name(static_cast<nlprov::Errc>(s - 1));
  return "UNKNOWN";
}

const char* nlprov_last_error(void) { return g_last_error.c_str(); }

void nlprov_free(char* s) { std::free(s); }

nlprov_status nlprov_service_open(const char* data_dir, nlprov_service** out) {
  if (!out) return NLPROV_INVALID_PARAMS;
  *out = nullptr;
  return guard([&] {
    auto svc = std::make_unique<nlprov_service>();
    if (data_dir) svc->impl.load_all(data_dir);
    *out = svc.release();
  });
}

void nlprov_service_close(nlprov_service* svc) { delete svc; }

nlprov_status nlprov_service_add_fixture(nlprov_service* svc, const char* dir, char** name_out) {
  return emit(name_out, [&] {
    need(svc, "service");
    need(dir, "directory");
    return svc->impl.add_fixture(dir);
  });
}

nlprov_status nlprov_fixtures(nlprov_service* svc, char** json_out) {
  return emit(json_out, [&] {
    need(svc, "service");
    return svc->impl.fixtures_json().dump();
  });
}

nlprov_status nlprov_run(nlprov_service* svc, const char* request_json, char** json_out) {
  return emit(json_out, [&] {
    need(svc, "service");
    need(request_json, "request");
    return svc->impl.run(nlohmann::json::parse(request_json)).dump();
  });
}

nlprov_status nlprov_submit(nlprov_service* svc, const char* request_json, char** json_out) {
  return emit(json_out, [&] {
    need(svc, "service");
    need(request_json, "request");
    return svc->impl.submit(nlohmann::json::parse(request_json)).dump();
  });
}

nlprov_status nlprov_explain(nlprov_service* svc, const char* answer_id, const char* mode,
                             const char* level, char** json_out) {
  return emit(json_out, [&] {
    need(svc, "service");
    need(answer_id, "answer id");
    return svc->impl.explanation(answer_id, mode ? mode : "", level ? level : "").dump();
  });
}

nlprov_status nlprov_check(nlprov_service* svc, const char* fixture, char** json_out, int* failures_out) {
  return emit(json_out, [&] {
    need(svc, "service");
    need(fixture, "fixture");
    auto results = nlprov::check_goldens(svc->impl.fixture(fixture));
    nlohmann::json cases = nlohmann::json::array();
    int failures = 0;
    for (auto& r : results) {
      if (!r.pass) ++failures;
      cases.push_back({{"name", r.name}, {"pass", r.pass}, {"expected", r.expected}, {"actual", r.actual}});
    }
    if (failures_out) *failures_out = failures;
    return nlohmann::json{{"fixture", fixture}, {"failures", failures}, {"cases", cases}}.dump();
  });
}

nlprov_status nlprov_bench(int assignments, int unique_values, int vars, int trials,
                           unsigned long long seed, char** json_out) {
  return emit(json_out, [&] {
    return nlprov::run_benchmark(assignments, unique_values, vars, trials, seed).to_json().dump();
  });
}

nlprov_status nlprov_serve(nlprov_service* svc, const char* host, int port) {
  return guard([&] {
    need(svc, "service");
    svc->impl.serve(host ? host : "127.0.0.1", port);
  });
}

nlprov_status nlprov_start(nlprov_service* svc, const char* host, int port, int* port_out) {
  return guard([&] {
    need(svc, "service");
    int p = svc->impl.start(host ? host : "127.0.0.1", port);
    if (port_out) *port_out = p;
  });
}

void nlprov_stop(nlprov_service* svc) {
  if (svc) svc->impl.stop();
}

}  // extern "C"

static_assert(NLPROV_NOT_FOUND == static_cast<int>(nlprov::Errc::NotFound) + 1,
              "status codes follow the error enum");
