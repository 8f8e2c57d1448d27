// Copyright 2026 The nlprov Authors
// SPDX-License-Identifier: Apache-2.0
#include "nlprov/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "nlprov/error.hpp"
#include "nlprov/value.hpp"

namespace nlprov {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  if (line.find('\t') != std::string::npos) {
    std::string cur;
    for (char c : line) {
      if (c == '\t') {
        out.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(trim(cur));
  } else {
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) out.push_back(f);
  }
  return out;
}

}  // namespace

DependencyTree::DependencyTree(std::vector<DepNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error(Errc::MalformedTree, "empty tree");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i].children.clear();
    if (!index_.emplace(nodes_[i].id, i).second)
      throw Error(Errc::MalformedTree, "duplicate node id " + std::to_string(nodes_[i].id));
  }
  for (auto& n : nodes_) {
    if (n.parent < 0) {
      if (root_ >= 0) throw Error(Errc::MalformedTree, "more than one root");
      root_ = n.id;
      continue;
    }
    auto it = index_.find(n.parent);
    if (it == index_.end())
      throw Error(Errc::MalformedTree, "node " + std::to_string(n.id) + " has unknown head " +
                                           std::to_string(n.parent));
    nodes_[it->second].children.push_back(n.id);
  }
  if (root_ < 0) throw Error(Errc::MalformedTree, "no root");
  // every node must reach the root
  for (auto& n : nodes_) {
    int cur = n.id;
    std::size_t steps = 0;
    while (node(cur).parent >= 0) {
      cur = node(cur).parent;
      if (++steps > nodes_.size()) throw Error(Errc::MalformedTree, "cycle in tree");
    }
  }
}

const DepNode& DependencyTree::node(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(Errc::NotFound, "no tree node " + std::to_string(id));
  return nodes_[it->second];
}

std::vector<int> DependencyTree::subtree(int id) const {
  std::vector<int> out;
  std::function<void(int)> rec = [&](int n) {
    out.push_back(n);
    for (int c : node(n).children) rec(c);
  };
  rec(id);
  return out;
}

std::vector<int> DependencyTree::preorder() const {
  if (root_ < 0) return {};
  return subtree(root_);
}

bool DependencyTree::descends(int desc, int anc) const {
  for (int cur = desc; cur >= 0; cur = node(cur).parent)
    if (cur == anc) return true;
  return false;
}

std::string DependencyTree::text() const {
  std::vector<int> ids;
  for (auto& n : nodes_) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += ' ';
    out += node(id).word;
  }
  return out;
}

bool DependencyTree::operator==(const DependencyTree& o) const {
  if (root_ != o.root_ || nodes_.size() != o.nodes_.size()) return false;
  for (auto& n : nodes_) {
    if (!o.has(n.id)) return false;
    const DepNode& m = o.node(n.id);
    if (n.word != m.word || n.pos != m.pos || n.rel != m.rel || n.parent != m.parent ||
        n.children != m.children)
      return false;
  }
  return true;
}

DependencyTree DependencyTree::from_conll(std::string_view text) {
  std::vector<DepNode> nodes;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split_fields(line);
    if (f.size() < 5)
      throw Error(Errc::ParseError, "tree line " + std::to_string(lineno) +
                                        ": expected id, word, pos, head, rel");
    DepNode n;
    try {
      n.id = std::stoi(f[0]);
      int head = std::stoi(f[3]);
      n.parent = head == 0 ? -1 : head;
    } catch (const std::exception&) {
      throw Error(Errc::ParseError, "tree line " + std::to_string(lineno) + ": bad id or head");
    }
    if (n.id <= 0) throw Error(Errc::ParseError, "tree ids must be positive");
    n.word = f[1];
    n.pos = f[2];
    n.rel = f[4];
    nodes.push_back(std::move(n));
  }
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const DepNode& a, const DepNode& b) { return a.id < b.id; });
  return DependencyTree(std::move(nodes));
}

std::string DependencyTree::to_conll() const {
  std::vector<DepNode> sorted = nodes_;
  std::sort(sorted.begin(), sorted.end(),
            [](const DepNode& a, const DepNode& b) { return a.id < b.id; });
  std::ostringstream out;
  for (auto& n : sorted)
    out << n.id << '\t' << n.word << '\t' << n.pos << '\t' << (n.parent < 0 ? 0 : n.parent)
        << '\t' << n.rel << '\n';
  return out.str();
}

DependencyTree DependencyTree::from_json(const nlohmann::json& j) {
  std::vector<DepNode> nodes;
  std::set<int> used;
  // first pass collects explicit ids so generated ones do not collide
  std::function<void(const nlohmann::json&)> scan = [&](const nlohmann::json& n) {
    if (n.contains("id")) used.insert(n.at("id").get<int>());
    if (n.contains("children"))
      for (auto& c : n.at("children")) scan(c);
  };
  scan(j);
  int next = 1;
  std::function<void(const nlohmann::json&, int)> walk = [&](const nlohmann::json& n, int parent) {
    if (!n.is_object() || !n.contains("word"))
      throw Error(Errc::ParseError, "tree node needs a \"word\" field");
    DepNode d;
    if (n.contains("id")) {
      d.id = n.at("id").get<int>();
    } else {
      while (used.count(next)) ++next;
      d.id = next;
      used.insert(next);
    }
    d.word = n.at("word").get<std::string>();
    d.pos = n.value("pos", "");
    d.rel = n.value("rel", "");
    d.parent = parent;
    int self = d.id;
    nodes.push_back(std::move(d));
    if (n.contains("children"))
      for (auto& c : n.at("children")) walk(c, self);
  };
  walk(j, -1);
  return DependencyTree(std::move(nodes));
}

nlohmann::json DependencyTree::to_json() const {
  std::function<nlohmann::json(int)> rec = [&](int id) {
    const DepNode& n = node(id);
    nlohmann::json j{{"id", n.id}, {"word", n.word}, {"pos", n.pos}, {"rel", n.rel}};
    if (!n.children.empty()) {
      j["children"] = nlohmann::json::array();
      for (int c : n.children) j["children"].push_back(rec(c));
    }
    return j;
  };
  return rec(root_);
}

bool TreeConfig::is_logical(const DepNode& n) const {
  std::string w;
  for (char c : n.word) w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return logical_words.count(w) != 0;
}

ValidationReport validate_question_tree(const DependencyTree& tree, const TreeConfig& cfg) {
  ValidationReport r;
  const DepNode& root = tree.node(tree.root());
  if (root.children.empty()) {
    r.message = "root has no object child";
    return r;
  }
  // object: the dobj child of the root, else its first noun child
  int object = -1;
  for (int c : root.children)
    if (tree.node(c).rel == "dobj") {
      object = c;
      break;
    }
  if (object < 0)
    for (int c : root.children)
      if (tree.node(c).pos.rfind("NN", 0) == 0) {
        object = c;
        break;
      }
  if (object < 0) {
    r.message = "no object node under the root (expected a dobj or noun child)";
    return r;
  }
  r.object = object;
  const DepNode& obj = tree.node(object);
  int nonverb = -1, verb = -1;
  for (int c : obj.children) {
    const DepNode& ch = tree.node(c);
    if (!cfg.is_mod(ch)) continue;
    if (cfg.is_verb(ch)) {
      if (verb < 0) verb = c;
    } else if (nonverb < 0) {
      nonverb = c;
    }
  }
  if (nonverb >= 0) {
    r.modifier = nonverb;
  } else if (verb >= 0) {
    r.modifier = verb;
    r.modifier_is_verb = true;
  }
  r.ok = true;
  return r;
}

ValidationReport require_question_tree(const DependencyTree& tree, const TreeConfig& cfg) {
  ValidationReport r = validate_question_tree(tree, cfg);
  if (!r.ok) throw Error(Errc::MalformedTree, r.message);
  return r;
}

}  // namespace nlprov
