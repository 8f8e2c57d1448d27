// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
// Command line front end over the C interface.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlprov/nlprov.h"

#ifndef NLPROV_DATA_DIR
#define NLPROV_DATA_DIR "data"
#endif

namespace {

using nlohmann::json;

struct Failure {
  int code;
};

// Takes ownership of a returned string; exits through Failure on error.
std::string take(nlprov_status st, char** out) {
  if (st != NLPROV_OK) {
    std::cerr << "error: " << nlprov_last_error() << "\n";
    throw Failure{2};
  }
  std::string s(*out);
  nlprov_free(*out);
  return s;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    throw Failure{2};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write " << path << "\n";
    throw Failure{2};
  }
}

void print_answer(const json& a, const std::string& mode, std::ostream& out) {
  std::vector<std::string> vals = a.at("answer").get<std::vector<std::string>>();
  std::string tuple;
  for (auto& v : vals) tuple += (tuple.empty() ? "" : ", ") + v;
  out << "answer: (" << tuple << ")  assignments: " << a.at("assignments").get<long>()
      << "  length: " << a.at("metrics").at("length").get<int>() << "\n";
  auto show = [&](const std::string& label, const std::string& text) {
    out << "[" << label << "]\n" << text << "\n";
  };
  if (mode == "single" || mode == "all") show("single", a.at("single").get<std::string>());
  if (mode == "factorized" || mode == "all") show("factorized", a.at("factorized").at("pretty").get<std::string>());
  if (mode == "summarized" || mode == "all") {
    const json& s = a.contains("summarized") ? a.at("summarized") : a.at("factorized");
    show("summarized " + a.at("level").get<std::string>(), s.at("pretty").get<std::string>());
  }
  out << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Explains query answers in natural language from their provenance"};
  std::string data_dir = std::getenv("NLPROV_DATA_DIR") ? std::getenv("NLPROV_DATA_DIR") : NLPROV_DATA_DIR;
  std::string fixture, query, inline_path, mode = "all", summarize = "none", out_path;
  std::string host = "127.0.0.1";
  double beta = 0;
  std::vector<std::string> swaps;
  bool list = false, check = false, as_json = false, no_template = false, serve = false, bench = false;
  int port = 8080;
  int bench_n = 5000, bench_unique = 5000, bench_vars = 5, bench_trials = 3;
  unsigned long long seed = 7;

  app.add_option("--data-dir", data_dir, "Directory holding fixtures/")->capture_default_str();
  app.add_option("--fixture", fixture, "Fixture name or fixture directory");
  app.add_option("--query", query, "Query name within the fixture");
  app.add_option("--inline", inline_path, "JSON file with an inline query (tree, queries, mapping)");
  app.add_option("--mode", mode, "Explanation to print")
      ->check(CLI::IsMember({"single", "factorized", "summarized", "all"}))
      ->capture_default_str();
  app.add_option("--summarize", summarize, "Summarization level: question word, attribute or none")
      ->capture_default_str();
  app.add_option("--beta", beta, "Run the word mapper with this similarity threshold");
  app.add_option("--swap", swaps, "Swap the variables of two nodes, as a,b");
  app.add_flag("--no-template", no_template, "Factorize every answer greedily");
  app.add_flag("--list", list, "List loaded fixtures");
  app.add_flag("--check", check, "Run the fixture goldens; exit 1 on any mismatch");
  app.add_flag("--json", as_json, "Print JSON instead of text");
  app.add_option("--out", out_path, "Also write the JSON result to this file");
  app.add_flag("--serve", serve, "Serve the HTTP API");
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port)->capture_default_str();
  app.add_flag("--bench", bench, "Synthetic scalability run");
  app.add_option("--assignments", bench_n, "Benchmark: assignments per answer")->capture_default_str();
  app.add_option("--unique", bench_unique, "Benchmark: distinct values per variable")->capture_default_str();
  app.add_option("--vars", bench_vars, "Benchmark: variables per assignment")->capture_default_str();
  app.add_option("--trials", bench_trials)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::ostringstream text;
  json result;

  if (bench) {
    char* out = nullptr;
    result = json::parse(take(nlprov_bench(bench_n, bench_unique, bench_vars, bench_trials, seed, &out), &out));
    text << "assignments " << bench_n << ", unique values " << bench_unique << ", vars " << bench_vars << "\n";
    for (auto& t : result.at("trials"))
      text << "factorization " << t.at("factorization_ms").get<double>() << " ms, sentence "
           << t.at("sentence_ms").get<double>() << " ms, length " << t.at("length").get<int>() << " (identity "
           << t.at("identity_length").get<int>() << ")\n";
    text << "mean factorization " << result.at("mean_factorization_ms").get<double>() << " ms, mean sentence "
         << result.at("mean_sentence_ms").get<double>() << " ms\n";
  } else {
    nlprov_service* svc = nullptr;
    bool have_dir = std::filesystem::is_directory(std::filesystem::path(data_dir) / "fixtures");
    if (nlprov_service_open(have_dir ? data_dir.c_str() : nullptr, &svc) != NLPROV_OK) {
      std::cerr << "error: " << nlprov_last_error() << "\n";
      return 2;
    }
    std::unique_ptr<nlprov_service, void (*)(nlprov_service*)> guard(svc, nlprov_service_close);
    if (!fixture.empty() && std::filesystem::is_directory(fixture)) {
      char* name = nullptr;
      fixture = take(nlprov_service_add_fixture(svc, fixture.c_str(), &name), &name);
    }
    if (serve) {
      std::cerr << "serving on http://" << host << ":" << port << "\n";
      if (nlprov_serve(svc, host.c_str(), port) != NLPROV_OK) {
        std::cerr << "error: " << nlprov_last_error() << "\n";
        return 2;
      }
      return 0;
    }
    if (list || fixture.empty()) {
      char* out = nullptr;
      result = json::parse(take(nlprov_fixtures(svc, &out), &out));
      for (auto& f : result) {
        text << f.at("name").get<std::string>() << "\n";
        for (auto& q : f.at("queries"))
          text << "  " << q.at("name").get<std::string>() << "  " << q.at("nl").get<std::string>() << "\n";
      }
    } else if (check) {
      char* out = nullptr;
      int failures = 0;
      result = json::parse(take(nlprov_check(svc, fixture.c_str(), &out, &failures), &out));
      for (auto& c : result.at("cases")) {
        text << (c.at("pass").get<bool>() ? "ok    " : "FAIL  ") << c.at("name").get<std::string>() << "\n";
        if (!c.at("pass").get<bool>())
          text << "  expected: " << c.at("expected").get<std::string>() << "\n"
               << "  actual:   " << c.at("actual").get<std::string>() << "\n";
      }
      text << result.at("cases").size() << " cases, " << failures << " failed\n";
      std::cout << (as_json ? result.dump(2) + "\n" : text.str());
      if (!out_path.empty()) write_text(out_path, result.dump(2) + "\n");
      return failures == 0 ? 0 : 1;
    } else {
      json req{{"fixture", fixture}, {"summarize", summarize}};
      if (!inline_path.empty()) {
        req["inline"] = json::parse(read_text(inline_path));
      } else if (!query.empty()) {
        req["query"] = query;
      } else {
        std::cerr << "error: give --query or --inline\n";
        return 2;
      }
      if (beta > 0) req["mapper"] = {{"beta", beta}};
      if (no_template) req["template"] = false;
      for (auto& s : swaps) {
        auto comma = s.find(',');
        if (comma == std::string::npos) {
          std::cerr << "error: --swap takes a,b\n";
          return 2;
        }
        req["swap"].push_back({std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))});
      }
      char* out = nullptr;
      result = json::parse(take(nlprov_run(svc, req.dump().c_str(), &out), &out));
      if (result.at("answers").empty()) text << "no answers\n";
      for (auto& a : result.at("answers")) print_answer(a, mode, text);
    }
  }
  std::cout << (as_json ? result.dump(2) + "\n" : text.str());
  if (!out_path.empty()) write_text(out_path, result.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
