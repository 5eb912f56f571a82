// Copyright 2026 The Persuasion Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "persuasion/tree_io.h"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "persuasion/errors.h"

namespace persuasion {
namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& what, const NodePath& path) {
  throw ValidationError(what + " at path " + PathToString(path));
}

Rational ReadProbability(const json& value, const std::string& key,
                         const NodePath& path) {
  if (!value.is_string() && !value.is_number_integer()) {
    Fail("field \"" + key + "\" must be a rational string", path);
  }
  Rational r = ParseRationalField(
      value.is_string() ? value.get<std::string>() : value.dump(),
      key + " at path " + PathToString(path));
  if (!r.in_unit_interval()) Fail("probability outside [0,1]", path);
  return r;
}

const json& Child(const json& node, const char* key, const NodePath& path) {
  auto it = node.find(key);
  if (it == node.end()) Fail(std::string("missing field \"") + key + "\"", path);
  return *it;
}

std::vector<Rational> ReadDistribution(const json& node, const char* key,
                                       const NodePath& path) {
  const json& list = Child(node, key, path);
  if (!list.is_array()) Fail(std::string("\"") + key + "\" must be a list", path);
  std::vector<Rational> out;
  for (const json& v : list) out.push_back(ReadProbability(v, key, path));
  return out;
}

NodePtr ReadNode(const json& node, NodePath& path) {
  if (!node.is_object()) Fail("node must be an object", path);
  auto kind_it = node.find("kind");
  if (kind_it == node.end() || !kind_it->is_string()) {
    Fail("node lacks a string \"kind\"", path);
  }
  const std::string kind = kind_it->get<std::string>();
  auto descend = [&](const json& child, int index) {
    path.push_back(index);
    NodePtr out = ReadNode(child, path);
    path.pop_back();
    return out;
  };
  if (kind == "leaf") return TreeNode::Leaf();
  if (kind == "designed") {
    NodePtr left = descend(Child(node, "left", path), 0);
    NodePtr right = descend(Child(node, "right", path), 1);
    return TreeNode::Designed(std::move(left), std::move(right));
  }
  if (kind == "determined") {
    Rational q1 = ReadProbability(Child(node, "q1", path), "q1", path);
    Rational q2 = ReadProbability(Child(node, "q2", path), "q2", path);
    NodePtr pass = descend(Child(node, "pass", path), 0);
    NodePtr fail = descend(Child(node, "fail", path), 1);
    return TreeNode::Determined(Experiment(std::move(q1), std::move(q2)),
                                std::move(pass), std::move(fail));
  }
  if (kind == "determined_nary") {
    std::vector<Rational> q1 = ReadDistribution(node, "q1", path);
    std::vector<Rational> q2 = ReadDistribution(node, "q2", path);
    const json& kids = Child(node, "children", path);
    if (!kids.is_array()) Fail("\"children\" must be a list", path);
    if (q1.size() != q2.size()) Fail("q1 and q2 lengths differ", path);
    if (kids.size() != q1.size()) {
      Fail("arity " + std::to_string(q1.size()) + " but " +
               std::to_string(kids.size()) + " children",
           path);
    }
    std::vector<NodePtr> children;
    for (std::size_t k = 0; k < kids.size(); ++k) {
      children.push_back(descend(kids[k], static_cast<int>(k)));
    }
    try {
      return TreeNode::DeterminedNary(
          NaryExperiment(std::move(q1), std::move(q2)), std::move(children));
    } catch (const ValidationError& e) {
      Fail(e.what(), path);
    }
  }
  Fail("unknown node kind \"" + kind + "\"", path);
}

}  // namespace

Rational ParseRationalField(std::string_view text, const std::string& where) {
  try {
    return Rational::Parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string(e.what()) + " (" + where + ")");
  }
}

TrialTree ParseTreeJson(const json& document) {
  if (!document.is_object()) {
    throw ValidationError("tree document must be an object");
  }
  std::optional<Rational> prior;
  if (auto it = document.find("prior"); it != document.end() && !it->is_null()) {
    if (!it->is_string() && !it->is_number_integer()) {
      throw ValidationError("prior must be a rational string");
    }
    prior = ParseRationalField(
        it->is_string() ? it->get<std::string>() : it->dump(), "prior");
    if (!prior->in_unit_interval()) {
      throw ValidationError("prior outside [0,1]");
    }
  }
  auto root_it = document.find("root");
  if (root_it == document.end()) {
    throw ValidationError("tree document lacks \"root\"");
  }
  NodePath path;
  return TrialTree(ReadNode(*root_it, path), std::move(prior));
}

TrialTree ParseTree(std::string_view document) {
  json parsed;
  try {
    parsed = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed tree document: ") + e.what());
  }
  return ParseTreeJson(parsed);
}

TrialTree LoadTreeFile(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw ValidationError("cannot open tree file " + filename);
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseTree(buf.str());
}

json NodeToJson(const TreeNode& node) {
  json out;
  out["kind"] = NodeKindName(node.kind());
  switch (node.kind()) {
    case NodeKind::kLeaf:
      break;
    case NodeKind::kDesigned:
      out["left"] = NodeToJson(node.child(0));
      out["right"] = NodeToJson(node.child(1));
      break;
    case NodeKind::kDetermined:
      out["q1"] = node.experiment().q1.ToString();
      out["q2"] = node.experiment().q2.ToString();
      out["pass"] = NodeToJson(node.child(0));
      out["fail"] = NodeToJson(node.child(1));
      break;
    case NodeKind::kDeterminedNary: {
      json q1 = json::array(), q2 = json::array(), kids = json::array();
      const NaryExperiment& e = node.nary_experiment();
      for (std::size_t k = 0; k < e.arity(); ++k) {
        q1.push_back(e.q1[k].ToString());
        q2.push_back(e.q2[k].ToString());
        kids.push_back(NodeToJson(node.child(k)));
      }
      out["q1"] = std::move(q1);
      out["q2"] = std::move(q2);
      out["children"] = std::move(kids);
      break;
    }
  }
  return out;
}

json TreeToJson(const TrialTree& tree) {
  json out;
  if (tree.prior) out["prior"] = tree.prior->ToString();
  out["root"] = NodeToJson(*tree.root);
  return out;
}

std::string SerializeTree(const TrialTree& tree) {
  return TreeToJson(tree).dump(2) + "\n";
}

}  // namespace persuasion
