// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/service.hpp"

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "nlprov/error.hpp"

namespace nlprov {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> tuple_texts(const std::vector<Value>& t) {
  std::vector<std::string> out;
  for (auto& v : t) out.push_back(v.text());
  return out;
}

std::size_t answer_index(const Session& s, const std::vector<std::string>& answer) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (tuple_texts(s.polynomial(i).answer) == answer) return i;
  throw Error(Errc::NotFound, "no answer " + json(answer).dump());
}

// Answer ids look like "<session>.<index>".
std::pair<long, std::size_t> parse_answer_id(const std::string& id) {
  auto dot = id.find('.');
  try {
    if (dot == std::string::npos) throw std::invalid_argument(id);
    std::size_t used = 0;
    long s = std::stol(id.substr(0, dot), &used);
    if (used != dot) throw std::invalid_argument(id);
    std::string rest = id.substr(dot + 1);
    unsigned long a = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(id);
    return {s, static_cast<std::size_t>(a)};
  } catch (const std::logic_error&) {
    throw Error(Errc::NotFound, "malformed answer id '" + id + "'");
  }
}

json explanation_json(const std::string& id, Mode mode, const std::string& level, const Sentence& s) {
  return {{"id", id}, {"mode", mode_name(mode)}, {"level", level}, {"text", s.canonical},
          {"pretty", s.pretty}};
}

}  // namespace

QueryRequest QueryRequest::from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidParams, "request must be an object");
  QueryRequest r;
  try {
    r.fixture = j.at("fixture").get<std::string>();
    if (j.contains("query")) r.query = j.at("query").get<std::string>();
    if (j.contains("inline")) r.inline_query = j.at("inline");
    if (r.query.has_value() == r.inline_query.has_value())
      throw Error(Errc::InvalidParams, "give exactly one of 'query' and 'inline'");
    r.options.summarize = j.value("summarize", "none");
    if (j.contains("mapper")) {
      r.options.use_mapper = true;
      r.options.beta = j.at("mapper").value("beta", 0.6);
    }
    if (j.contains("swap"))
      for (auto& p : j.at("swap")) r.options.swaps.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    r.options.use_template = j.value("template", true);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidParams, e.what());
  }
  return r;
}

const char* error_stage(Errc c) {
  switch (c) {
    case Errc::MalformedTree: return "tree";
    case Errc::ArityMismatch:
    case Errc::TypeMismatch:
    case Errc::UnknownRelation:
    case Errc::InvalidQuery: return "query";
    case Errc::UnmappedHead:
    case Errc::InvalidMapping: return "mapping";
    case Errc::LeafNotFound:
    case Errc::TemplateMismatch: return "factorization";
    case Errc::UnhandledShape:
    case Errc::NoSiblingMapping:
    case Errc::LookupFailed: return "sentence";
    case Errc::RangeOnNonNumeric: return "summarization";
    case Errc::ParseError:
    case Errc::IoError: return "input";
    case Errc::InvalidParams:
    case Errc::NotFound: return "request";
  }
  return "request";
}

json error_json(const Error& e) {
  return {{"error", {{"code", errc_name(e.code())}, {"stage", error_stage(e.code())}, {"message", e.what()}}}};
}

std::vector<GoldenResult> check_goldens(const Fixture& fx) {
  std::vector<GoldenResult> out;
  auto path = fs::path(fx.dir) / "goldens.json";
  if (!fs::exists(path)) return out;
  json g = json::parse(read_file(path.string()));
  std::map<std::string, Session> sessions;
  auto session = [&](const std::string& q) -> Session& {
    auto it = sessions.find(q);
    if (it == sessions.end()) it = sessions.emplace(q, Session::prepare(fx.database, fx.query(q))).first;
    return it->second;
  };
  auto run_case = [&](const json& c, auto&& body) {
    GoldenResult r;
    r.name = c.value("name", c.value("query", "?"));
    try {
      body(c, r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.actual = e.what();
    }
    out.push_back(std::move(r));
  };
  for (auto& c : g.value("sentences", json::array())) {
    run_case(c, [&](const json& c, GoldenResult& r) {
      Session& s = session(c.at("query").get<std::string>());
      std::size_t i = answer_index(s, c.at("answer").get<std::vector<std::string>>());
      Mode mode = parse_mode(c.value("mode", "factorized"));
      std::string level = c.value("level", "none");
      Sentence sent;
      if (c.contains("circuit")) {
        CNode f = parse_circuit(c.at("circuit").get<std::string>(),
                                resolver_for(s.polynomial(i).monomials));
        auto idx = mode == Mode::Summarized ? find_level(s.levels(), s.context(), level) : std::nullopt;
        sent = idx ? factorized_sentence(s.context(), summarize(f, spec_for_level(s.levels(), *idx), s.context()))
                   : factorized_sentence(s.context(), f);
      } else {
        sent = s.explain(i, mode, level);
      }
      bool pretty = c.contains("pretty");
      r.expected = pretty ? c.at("pretty").get<std::string>() : c.at("text").get<std::string>();
      r.actual = pretty ? sent.pretty : sent.canonical;
      r.pass = r.expected == r.actual;
    });
  }
  for (auto& c : g.value("circuits", json::array())) {
    run_case(c, [&](const json& c, GoldenResult& r) {
      Session& s = session(c.at("query").get<std::string>());
      std::vector<Polynomial> parts;
      for (auto& a : c.at("answers")) parts.push_back(s.polynomial(answer_index(s, a.get<std::vector<std::string>>())));
      Polynomial p = combine(parts);
      CNode f = c.contains("circuit")
                    ? parse_circuit(c.at("circuit").get<std::string>(), resolver_for(p.monomials))
                    : greedy_factorize(s.order(), p.monomials);
      auto m = metrics(f);
      json actual{{"length", m.length},
                  {"readability", m.readability},
                  {"compatible", is_compatible(f, s.order(), p.monomials)},
                  {"expands", same_multiset(expand(f), p.monomials)}};
      json expected = c.at("expect");
      r.pass = true;
      for (auto& [k, v] : expected.items()) {
        if (k == "max_length") {
          r.pass = r.pass && m.length <= v.get<int>();
        } else {
          r.pass = r.pass && actual.contains(k) && actual[k] == v;
        }
      }
      r.expected = expected.dump();
      r.actual = actual.dump();
    });
  }
  return out;
}

struct Service::Http {
  httplib::Server server;
  std::thread thread;
};

Service::Service() = default;
Service::~Service() { stop(); }

void Service::load_all(const std::string& data_dir) {
  fs::path root = fs::path(data_dir) / "fixtures";
  if (!fs::is_directory(root)) throw Error(Errc::IoError, "no fixtures under " + data_dir);
  std::vector<fs::path> dirs;
  for (auto& e : fs::directory_iterator(root))
    if (fs::exists(e.path() / "fixture.json")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  for (auto& d : dirs) add_fixture(d.string());
}

std::string Service::add_fixture(const std::string& dir) {
  auto fx = std::make_shared<const Fixture>(load_fixture(dir));
  std::lock_guard lock(fixtures_mu_);
  std::string name = fx->name;
  // loaded fixtures stay immutable; sessions may still refer to them
  if (auto it = fixtures_.find(name); it != fixtures_.end()) {
    if (fs::equivalent(it->second->dir, dir)) return name;
    throw Error(Errc::InvalidParams, "fixture '" + name + "' is already loaded from " + it->second->dir);
  }
  fixtures_[name] = std::move(fx);
  return name;
}

const Fixture& Service::fixture(const std::string& name) const {
  std::lock_guard lock(fixtures_mu_);
  auto it = fixtures_.find(name);
  if (it == fixtures_.end()) throw Error(Errc::NotFound, "unknown fixture '" + name + "'");
  return *it->second;
}

json Service::fixtures_json() const {
  std::lock_guard lock(fixtures_mu_);
  json out = json::array();
  for (auto& [name, fx] : fixtures_) {
    json qs = json::array();
    for (auto& q : fx->queries) qs.push_back({{"name", q.name}, {"nl", q.nl}, {"cqs", q.query.cqs.size()}});
    json rels = json::array();
    for (auto& r : fx->database.schema.relations) rels.push_back(r.name);
    out.push_back({{"name", name}, {"relations", rels}, {"queries", qs}});
  }
  return out;
}

const QueryFixture& Service::resolve(const QueryRequest& r, QueryFixture& scratch) const {
  const Fixture& fx = fixture(r.fixture);
  if (r.query) return fx.query(*r.query);
  scratch = query_fixture_from_json(*r.inline_query, fx.database.schema);
  return scratch;
}

json Service::run(const json& request) const {
  QueryRequest r = QueryRequest::from_json(request);
  QueryFixture scratch;
  const QueryFixture& qf = resolve(r, scratch);
  json answers = json::array();
  for (auto& b : run_query(fixture(r.fixture).database, qf, r.options)) answers.push_back(b.to_json());
  return {{"fixture", r.fixture}, {"query", qf.name}, {"answers", answers}};
}

json Service::submit(const json& request) {
  QueryRequest r = QueryRequest::from_json(request);
  QueryFixture scratch;
  const QueryFixture& qf = resolve(r, scratch);
  auto entry = std::make_shared<Entry>();
  entry->session = Session::prepare(fixture(r.fixture).database, qf, r.options);
  long id;
  {
    std::lock_guard lock(sessions_mu_);
    id = next_session_++;
    sessions_[id] = entry;
    while (sessions_.size() > kMaxSessions) sessions_.erase(sessions_.begin());
  }
  const Session& s = entry->session;
  json answers = json::array();
  for (std::size_t i = 0; i < s.size(); ++i)
    answers.push_back({{"id", std::to_string(id) + "." + std::to_string(i)},
                       {"answer", tuple_texts(s.polynomial(i).answer)},
                       {"assignments", s.polynomial(i).monomials.size()}});
  return {{"session", id},
          {"fixture", r.fixture},
          {"query", qf.name},
          {"mapping", s.mapping().to_json()},
          {"levels", s.level_names()},
          {"evaluation_ms", s.evaluation_ms()},
          {"answers", answers}};
}

json Service::explanation(const std::string& answer_id, const std::string& mode_text,
                          const std::string& level_text) {
  Mode mode = parse_mode(mode_text.empty() ? "factorized" : mode_text);
  std::string level = mode == Mode::Summarized && !level_text.empty() ? level_text : "none";
  auto key = std::make_tuple(answer_id, std::string(mode_name(mode)), level);
  {
    std::lock_guard lock(cache_mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto [sid, index] = parse_answer_id(answer_id);
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(sessions_mu_);
    auto it = sessions_.find(sid);
    if (it == sessions_.end()) throw Error(Errc::NotFound, "unknown answer '" + answer_id + "'");
    entry = it->second;
  }
  json out;
  {
    std::lock_guard lock(entry->mu);
    if (index >= entry->session.size()) throw Error(Errc::NotFound, "unknown answer '" + answer_id + "'");
    out = explanation_json(answer_id, mode, level, entry->session.explain(index, mode, level));
  }
  std::lock_guard lock(cache_mu_);
  return cache_.emplace(key, std::move(out)).first->second;
}

int Service::start(const std::string& host, int port) {
  if (http_) throw Error(Errc::InvalidParams, "service already running");
  http_ = std::make_unique<Http>();
  auto& srv = http_->server;
  auto reply = [](httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };
  auto guarded = [this, reply](auto&& fn) {
    return [this, reply, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, fn(req));
      } catch (const Error& e) {
        reply(res, error_json(e), e.code() == Errc::NotFound ? 404 : 400);
      } catch (const json::exception& e) {
        reply(res, error_json(Error(Errc::ParseError, e.what())), 400);
      } catch (const std::exception& e) {
        reply(res, {{"error", {{"code", "INTERNAL"}, {"stage", "service"}, {"message", e.what()}}}}, 500);
      }
    };
  };
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  srv.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  srv.Get("/fixtures", guarded([this](const httplib::Request&) { return fixtures_json(); }));
  srv.Post("/queries", guarded([this](const httplib::Request& req) { return submit(json::parse(req.body)); }));
  srv.Get(R"(/answers/([^/]+)/explanation)", guarded([this](const httplib::Request& req) {
            return explanation(req.matches[1].str(), req.get_param_value("mode"), req.get_param_value("level"));
          }));
  int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    http_.reset();
    throw Error(Errc::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  http_->thread = std::thread([this] { http_->server.listen_after_bind(); });
  return bound;
}

void Service::serve(const std::string& host, int port) {
  start(host, port);
  http_->thread.join();
}

void Service::stop() {
  if (!http_) return;
  http_->server.stop();
  if (http_->thread.joinable()) http_->thread.join();
  http_.reset();
}

}  // namespace nlprov
