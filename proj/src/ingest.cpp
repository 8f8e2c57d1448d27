// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/ingest.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nlprov/error.hpp"

namespace fs = std::filesystem;

namespace nlprov {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  std::size_t i = 0;
  auto end_row = [&] {
    row.push_back(field);
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  while (i < text.size()) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\r') {
      // swallowed; CRLF and LF both end a record
    } else if (c == '\n') {
      end_row();
    } else {
      field += c;
      any = true;
    }
    ++i;
  }
  if (quoted) throw Error(Errc::ParseError, "unterminated quoted CSV field");
  if (any || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string write_csv(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell(r[i]);
    out << "\n";
  };
  line(header);
  for (auto& r : rows) line(r);
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << data;
}

Database load_database(const std::string& schema_path, const std::string& csv_dir) {
  Database db;
  db.schema = Schema::parse(read_file(schema_path));
  for (auto& rel : db.schema.relations) {
    std::string path = (fs::path(csv_dir) / (rel.name + ".csv")).string();
    auto recs = parse_csv(read_file(path));
    if (recs.empty()) throw Error(Errc::ParseError, path + ": missing header row");
    const auto& header = recs[0];
    if (header.size() != rel.attrs.size())
      throw Error(Errc::ArityMismatch, rel.name + " header has " + std::to_string(header.size()) +
                                           " columns, expected " + std::to_string(rel.attrs.size()));
    for (std::size_t c = 0; c < header.size(); ++c)
      if (trim(header[c]) != rel.attrs[c].name)
        throw Error(Errc::ParseError, rel.name + " header column " + std::to_string(c + 1) +
                                          " is '" + header[c] + "', expected '" +
                                          rel.attrs[c].name + "'");
    auto& rows = db.tables[rel.name];
    for (std::size_t r = 1; r < recs.size(); ++r) {
      const auto& rec = recs[r];
      if (rec.size() == 1 && trim(rec[0]).empty()) continue;
      if (rec.size() != rel.attrs.size())
        throw Error(Errc::ArityMismatch, rel.name + " row " + std::to_string(r) + ": " +
                                             std::to_string(rec.size()) + " fields, expected " +
                                             std::to_string(rel.attrs.size()));
      Tuple t;
      for (std::size_t c = 0; c < rec.size(); ++c) {
        if (rel.attrs[c].kind == Kind::Number) {
          if (!Value::looks_numeric(rec[c]))
            throw Error(Errc::TypeMismatch, rel.name + " row " + std::to_string(r) + " column " +
                                                std::to_string(c + 1) + " (" + rel.attrs[c].name +
                                                "): '" + rec[c] + "' is not a number");
          t.push_back(Value::num(rec[c]));
        } else {
          t.push_back(Value::str(rec[c]));
        }
      }
      rows.push_back(std::move(t));
    }
  }
  db.validate();
  return db;
}

void save_database(const Database& db, const std::string& schema_path, const std::string& csv_dir) {
  write_file(schema_path, db.schema.to_text());
  for (auto& rel : db.schema.relations) {
    std::vector<std::string> header;
    for (auto& a : rel.attrs) header.push_back(a.name);
    std::vector<std::vector<std::string>> rows;
    auto it = db.tables.find(rel.name);
    if (it != db.tables.end())
      for (auto& t : it->second) {
        std::vector<std::string> r;
        for (auto& v : t) r.push_back(v.text());
        rows.push_back(std::move(r));
      }
    write_file((fs::path(csv_dir) / (rel.name + ".csv")).string(), write_csv(header, rows));
  }
}

DependencyTree load_tree(const std::string& path) {
  std::string text = read_file(path);
  if (fs::path(path).extension() == ".json") return DependencyTree::from_json(nlohmann::json::parse(text));
  return DependencyTree::from_conll(text);
}

QueryFixture query_fixture_from_json(const nlohmann::json& j, const Schema& schema,
                                     const std::string& base_dir) {
  try {
    QueryFixture f;
    f.name = j.value("name", "inline");
    f.nl = j.value("nl", "");
    f.note = j.value("note", "");
    if (j.contains("conll")) {
      f.tree = DependencyTree::from_conll(j.at("conll").get<std::string>());
    } else {
      const auto& t = j.at("tree");
      if (t.is_string()) {
        if (base_dir.empty()) throw Error(Errc::InvalidParams, "tree paths need a fixture directory");
        f.tree = load_tree((fs::path(base_dir) / t.get<std::string>()).string());
      } else {
        f.tree = DependencyTree::from_json(t);
      }
    }
    std::string qtext;
    const auto& qs = j.at("queries");
    if (qs.is_string()) {
      qtext = qs.get<std::string>();
    } else {
      for (auto& q : qs) qtext += q.get<std::string>() + "\n";
    }
    f.query = UnionQuery::parse(qtext);
    f.query.validate(schema);
    require_question_tree(f.tree);
    if (j.contains("mapping")) {
      f.mapping = UnionWordMapping::from_json(j.at("mapping"));
      f.mapping.validate(f.tree, f.query);
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

QueryFixture load_query_fixture(const std::string& path, const Schema& schema) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
  if (!j.contains("name")) j["name"] = fs::path(path).stem().string();
  auto f = query_fixture_from_json(j, schema, fs::path(path).parent_path().string());
  if (!j.contains("mapping")) throw Error(Errc::InvalidMapping, path + ": missing mapping");
  return f;
}

const QueryFixture& Fixture::query(std::string_view n) const {
  for (auto& q : queries)
    if (q.name == n) return q;
  throw Error(Errc::NotFound, "fixture " + name + " has no query '" + std::string(n) + "'");
}

Fixture load_fixture(const std::string& dir) {
  fs::path base(dir);
  auto j = nlohmann::json::parse(read_file((base / "fixture.json").string()));
  Fixture f;
  f.dir = dir;
  f.name = j.value("name", base.filename().string());
  f.database = load_database((base / j.value("schema", "schema.txt")).string(),
                             (base / j.value("csv_dir", ".")).string());
  for (auto& q : j.value("queries", nlohmann::json::array()))
    f.queries.push_back(load_query_fixture((base / q.get<std::string>()).string(), f.database.schema));
  return f;
}

Polynomial generate_synthetic(int num_assignments, int unique_values_per_var, int num_vars,
                              std::uint64_t seed) {
  if (num_assignments < 1 || num_vars < 1 || unique_values_per_var < 1 ||
      unique_values_per_var > num_assignments)
    throw Error(Errc::InvalidParams, "need 1 <= unique_values_per_var <= num_assignments and num_vars >= 1");
  std::mt19937_64 rng(seed);
  Polynomial p;
  p.answer = {Value::str("v0")};
  p.monomials.resize(num_assignments);
  for (auto& m : p.monomials) m.pairs.emplace_back(1, Value::str("v0"));
  std::vector<int> slot(num_assignments);
  for (int var = 2; var <= num_vars; ++var) {
    for (int i = 0; i < num_assignments; ++i) slot[i] = i % unique_values_per_var;
    for (int i = num_assignments - 1; i > 0; --i) {
      int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(slot[i], slot[j]);
    }
    long long base = 1 + static_cast<long long>(var - 2) * unique_values_per_var;
    for (int i = 0; i < num_assignments; ++i)
      p.monomials[i].pairs.emplace_back(var, Value::str("v" + std::to_string(base + slot[i])));
  }
  for (int i = 0; i < num_assignments; ++i) p.sources.push_back(static_cast<std::size_t>(i));
  return p;
}

}  // namespace nlprov
