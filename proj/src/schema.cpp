// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/schema.hpp"

#include <set>
#include <sstream>

#include "nlprov/error.hpp"

namespace nlprov {

namespace {

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (c == sep && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Attribute parse_attr(const std::string& spec, int lineno) {
  auto fail = [&](const std::string& why) {
    return Error(Errc::ParseError, "schema line " + std::to_string(lineno) + ": " + why);
  };
  std::string s = trim(spec);
  Attribute a;
  auto at = s.rfind('@');
  auto lastq = s.rfind('"');
  if (at != std::string::npos && (lastq == std::string::npos || at > lastq)) {
    a.category = trim(s.substr(at + 1));
    s = trim(s.substr(0, at));
  }
  auto c1 = s.find(':');
  if (c1 == std::string::npos) throw fail("attribute '" + s + "' needs a kind");
  a.name = trim(s.substr(0, c1));
  std::string rest = s.substr(c1 + 1);
  auto c2 = rest.find(':');
  std::string kind = trim(rest.substr(0, c2));
  if (kind == "string" || kind == "STRING") {
    a.kind = Kind::String;
  } else if (kind == "number" || kind == "NUMBER") {
    a.kind = Kind::Number;
  } else {
    throw fail("unknown kind '" + kind + "'");
  }
  if (c2 != std::string::npos) {
    std::string al = trim(rest.substr(c2 + 1));
    if (al.size() < 2 || al.front() != '"' || al.back() != '"')
      throw fail("aliases must be a quoted list");
    al = al.substr(1, al.size() - 2);
    std::string cur;
    for (char c : al + "|") {
      if (c == '|') {
        if (!trim(cur).empty()) a.aliases.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  if (a.name.empty()) throw fail("empty attribute name");
  return a;
}

}  // namespace

int Relation::index_of(std::string_view attr) const {
  for (std::size_t i = 0; i < attrs.size(); ++i)
    if (attrs[i].name == attr) return static_cast<int>(i);
  return -1;
}

Schema Schema::parse(std::string_view text) {
  Schema sc;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::set<std::string> names;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
      throw Error(Errc::ParseError, "schema line " + std::to_string(lineno) + ": expected name(...)");
    Relation r;
    r.name = trim(t.substr(0, open));
    if (!names.insert(r.name).second)
      throw Error(Errc::ParseError, "duplicate relation " + r.name);
    std::set<std::string> attrs;
    for (auto& spec : split_top(t.substr(open + 1, t.size() - open - 2), ',')) {
      Attribute a = parse_attr(spec, lineno);
      if (!attrs.insert(a.name).second)
        throw Error(Errc::ParseError, "duplicate attribute " + a.name + " in " + r.name);
      r.attrs.push_back(std::move(a));
    }
    sc.relations.push_back(std::move(r));
  }
  return sc;
}

std::string Schema::to_text() const {
  std::ostringstream out;
  for (auto& r : relations) {
    out << r.name << '(';
    for (std::size_t i = 0; i < r.attrs.size(); ++i) {
      const Attribute& a = r.attrs[i];
      if (i) out << ", ";
      out << a.name << ':' << (a.kind == Kind::Number ? "number" : "string");
      if (!a.aliases.empty()) {
        out << ":\"";
        for (std::size_t k = 0; k < a.aliases.size(); ++k) out << (k ? "|" : "") << a.aliases[k];
        out << '"';
      }
      if (!a.category.empty()) out << '@' << a.category;
    }
    out << ")\n";
  }
  return out.str();
}

const Relation* Schema::find(std::string_view name) const {
  for (auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

const Relation& Schema::at(std::string_view name) const {
  const Relation* r = find(name);
  if (!r) throw Error(Errc::UnknownRelation, "unknown relation '" + std::string(name) + "'");
  return *r;
}

const std::vector<Tuple>& Database::table(std::string_view name) const {
  auto it = tables.find(std::string(name));
  if (it == tables.end())
    throw Error(Errc::UnknownRelation, "unknown relation '" + std::string(name) + "'");
  return it->second;
}

void Database::validate() const {
  for (auto& [name, rows] : tables) {
    const Relation& r = schema.at(name);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != r.attrs.size())
        throw Error(Errc::ArityMismatch, name + " row " + std::to_string(i + 1) + ": " +
                                             std::to_string(rows[i].size()) + " fields, expected " +
                                             std::to_string(r.attrs.size()));
      for (std::size_t c = 0; c < rows[i].size(); ++c)
        if (rows[i][c].kind() != r.attrs[c].kind)
          throw Error(Errc::TypeMismatch, name + " row " + std::to_string(i + 1) + " column " +
                                              r.attrs[c].name + ": kind mismatch");
    }
  }
}

std::size_t Database::total_tuples() const {
  std::size_t n = 0;
  for (auto& [_, rows] : tables) n += rows.size();
  return n;
}

std::map<std::string, std::size_t> Database::row_counts() const {
  std::map<std::string, std::size_t> out;
  for (auto& [name, rows] : tables) out[name] = rows.size();
  return out;
}

}  // namespace nlprov
