// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/query.hpp"

#include <cctype>
#include <sstream>

#include "nlprov/error.hpp"

namespace nlprov {

namespace {

std::vector<std::string> split_body(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  char quote = 0;
  for (char c : s) {
    if (quote) {
      if (c == quote) quote = 0;
      cur += c;
      continue;
    }
    if (c == '\'' || c == '"') quote = c;
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

Term parse_term(const std::string& raw) {
  std::string t = trim(raw);
  if (t.size() >= 2 && (t.front() == '\'' || t.front() == '"') && t.back() == t.front())
    return Term::constant_of(Value::str(t.substr(1, t.size() - 2)));
  if (Value::looks_numeric(t)) return Term::constant_of(Value::num(t));
  if (!is_ident(t)) throw Error(Errc::ParseError, "bad term '" + t + "'");
  return Term::variable(t);
}

Atom parse_atom(const std::string& s) {
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw Error(Errc::ParseError, "bad atom '" + s + "'");
  Atom a;
  a.relation = trim(s.substr(0, open));
  if (!is_ident(a.relation)) throw Error(Errc::ParseError, "bad relation name '" + a.relation + "'");
  for (auto& t : split_body(s.substr(open + 1, s.size() - open - 2))) a.terms.push_back(parse_term(t));
  return a;
}

// position of a comparison operator outside quotes, or npos
std::size_t find_op(const std::string& s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') quote = c;
    if (c == '=' || c == '<' || c == '>') return i;
  }
  return std::string::npos;
}

const char* op_text(CmpOp op) {
  switch (op) {
    case CmpOp::EQ: return "=";
    case CmpOp::LT: return "<";
    case CmpOp::GT: return ">";
  }
  return "?";
}

}  // namespace

std::string Term::to_string() const {
  if (is_var) return var;
  if (constant.is_number()) return constant.text();
  return "'" + constant.text() + "'";
}

bool Constraint::holds(const Value& l, const Value& r) const {
  switch (op) {
    case CmpOp::EQ: return l == r;
    case CmpOp::LT: return l.kind() == r.kind() && l < r;
    case CmpOp::GT: return l.kind() == r.kind() && l > r;
  }
  return false;
}

ConjunctiveQuery ConjunctiveQuery::parse(std::string_view text) {
  std::string s = trim(text);
  if (!s.empty() && s.back() == '.') s.pop_back();
  auto arrow = s.find(":-");
  if (arrow == std::string::npos) throw Error(Errc::ParseError, "query needs ':-'");
  std::string head = trim(s.substr(0, arrow));
  ConjunctiveQuery q;
  auto open = head.find('(');
  if (open == std::string::npos || head.back() != ')')
    throw Error(Errc::ParseError, "bad query head '" + head + "'");
  q.head_name = trim(head.substr(0, open));
  for (auto& v : split_body(head.substr(open + 1, head.size() - open - 2))) {
    if (!is_ident(v)) throw Error(Errc::ParseError, "head term must be a variable: '" + v + "'");
    q.head_vars.push_back(v);
  }
  for (auto& item : split_body(s.substr(arrow + 2))) {
    std::size_t op = find_op(item);
    auto paren = item.find('(');
    if (op != std::string::npos && (paren == std::string::npos || op < paren)) {
      Constraint c;
      c.lhs = parse_term(item.substr(0, op));
      c.op = item[op] == '=' ? CmpOp::EQ : item[op] == '<' ? CmpOp::LT : CmpOp::GT;
      c.rhs = parse_term(item.substr(op + 1));
      q.constraints.push_back(std::move(c));
    } else {
      q.atoms.push_back(parse_atom(item));
    }
  }
  if (q.atoms.empty()) throw Error(Errc::ParseError, "query has no atoms");
  return q;
}

std::string ConjunctiveQuery::to_string() const {
  std::ostringstream out;
  out << head_name << '(';
  for (std::size_t i = 0; i < head_vars.size(); ++i) out << (i ? ", " : "") << head_vars[i];
  out << ") :- ";
  bool first = true;
  for (auto& a : atoms) {
    out << (first ? "" : ", ") << a.relation << '(';
    for (std::size_t i = 0; i < a.terms.size(); ++i) out << (i ? ", " : "") << a.terms[i].to_string();
    out << ')';
    first = false;
  }
  for (auto& c : constraints)
    out << ", " << c.lhs.to_string() << ' ' << op_text(c.op) << ' ' << c.rhs.to_string();
  return out.str();
}

std::set<std::string> ConjunctiveQuery::variables() const {
  std::set<std::string> out;
  for (auto& a : atoms)
    for (auto& t : a.terms)
      if (t.is_var) out.insert(t.var);
  return out;
}

bool ConjunctiveQuery::has_var(std::string_view v) const {
  for (auto& a : atoms)
    for (auto& t : a.terms)
      if (t.is_var && t.var == v) return true;
  return false;
}

void ConjunctiveQuery::validate(const Schema& schema) const {
  for (auto& a : atoms) {
    const Relation* r = schema.find(a.relation);
    if (!r) throw Error(Errc::UnknownRelation, "unknown relation '" + a.relation + "'");
    if (r->attrs.size() != a.terms.size())
      throw Error(Errc::ArityMismatch, "atom " + a.relation + " has " +
                                           std::to_string(a.terms.size()) + " terms, expected " +
                                           std::to_string(r->attrs.size()));
    for (std::size_t i = 0; i < a.terms.size(); ++i)
      if (!a.terms[i].is_var && a.terms[i].constant.kind() != r->attrs[i].kind)
        throw Error(Errc::TypeMismatch, "constant " + a.terms[i].to_string() + " in " + a.relation +
                                            "." + r->attrs[i].name);
  }
  for (auto& v : head_vars)
    if (!has_var(v)) throw Error(Errc::InvalidQuery, "head variable " + v + " not in any atom");
  for (auto& c : constraints)
    for (const Term* t : {&c.lhs, &c.rhs})
      if (t->is_var && !has_var(t->var))
        throw Error(Errc::InvalidQuery, "constraint variable " + t->var + " not in any atom");
}

std::optional<AttrRef> ConjunctiveQuery::attribute_of(std::string_view var,
                                                      const Schema& schema) const {
  for (auto& a : atoms) {
    const Relation* r = schema.find(a.relation);
    if (!r) continue;
    for (std::size_t i = 0; i < a.terms.size() && i < r->attrs.size(); ++i)
      if (a.terms[i].is_var && a.terms[i].var == var)
        return AttrRef{r->name, r->attrs[i].name, static_cast<int>(i)};
  }
  return std::nullopt;
}

std::vector<std::pair<CmpOp, Value>> ConjunctiveQuery::constants_for(std::string_view var) const {
  std::vector<std::pair<CmpOp, Value>> out;
  for (auto& c : constraints) {
    if (c.lhs.is_var && c.lhs.var == var && !c.rhs.is_var) out.emplace_back(c.op, c.rhs.constant);
    if (c.rhs.is_var && c.rhs.var == var && !c.lhs.is_var) {
      CmpOp flipped = c.op == CmpOp::LT ? CmpOp::GT : c.op == CmpOp::GT ? CmpOp::LT : CmpOp::EQ;
      out.emplace_back(flipped, c.lhs.constant);
    }
  }
  return out;
}

UnionQuery UnionQuery::parse(std::string_view text) {
  UnionQuery u;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    u.cqs.push_back(ConjunctiveQuery::parse(t));
  }
  if (u.cqs.empty()) throw Error(Errc::ParseError, "no queries");
  return u;
}

std::string UnionQuery::to_string() const {
  std::string out;
  for (auto& q : cqs) out += q.to_string() + "\n";
  return out;
}

void UnionQuery::validate(const Schema& schema) const {
  if (cqs.empty()) throw Error(Errc::InvalidQuery, "empty union");
  for (auto& q : cqs) {
    q.validate(schema);
    if (q.head_vars.size() != cqs.front().head_vars.size())
      throw Error(Errc::InvalidQuery, "union members differ in head arity");
  }
}

}  // namespace nlprov
