#include "ralearn/ct.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ralearn {

ClassificationTree::ClassificationTree(TreeOracle& tq) : tq_(tq) {
  CTNode root;
  root.suffix = SymbolicSuffix{};
  nodes_.push_back(std::move(root));
  sift(DataWord{});
}

NodeId ClassificationTree::add_node(CTNode n) {
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

NodeId ClassificationTree::sift(const DataWord& u, std::optional<NodeId> from) {
  if (auto it = leaf_of_.find(u); it != leaf_of_.end()) {
    nodes_[it->second].prefixes.erase(u);
    leaf_of_.erase(it);
  }
  NodeId n = from.value_or(root());
  while (!nodes_[n].is_leaf()) {
    const auto suffixes = ancestors(n);
    std::optional<NodeId> next;
    for (NodeId c : nodes_[n].children) {
      if (find_bijection(tq_, u, nodes_[c].rep, suffixes)) {
        next = c;
        break;
      }
    }
    if (!next) {
      CTNode leaf;
      leaf.rep = u;
      leaf.parent = n;
      next = add_node(std::move(leaf));
      nodes_[n].children.push_back(*next);
    }
    n = *next;
  }
  nodes_[n].prefixes.insert(u);
  leaf_of_[u] = n;
  U_.insert(u);
  return n;
}

void ClassificationTree::expand(const DataWord& u) {
  if (!in_U(u)) sift(u);
  short_.insert(u);
  for (ActionId a = 0; a < alphabet().size(); ++a) {
    for (const Guard& g : initial_guards(u, a)) {
      const DataWord t = extension(u, a, g);
      if (!in_U(t)) sift(t);
    }
  }
}

void ClassificationTree::refine(NodeId leaf, const SymbolicSuffix& v) {
  if (!nodes_.at(leaf).is_leaf()) throw std::logic_error("refine on an inner node");
  PrefixSet moved = std::move(nodes_[leaf].prefixes);
  nodes_[leaf].prefixes.clear();
  nodes_[leaf].suffix = v;
  const DataWord rep = nodes_[leaf].rep;
  for (const auto& u : moved) leaf_of_.erase(u);
  // The representative goes first so that it stays the representative of
  // the first new leaf.
  if (moved.count(rep)) sift(rep, leaf);
  for (const auto& u : moved) {
    if (u != rep) sift(u, leaf);
  }
}

NodeId ClassificationTree::lca(NodeId a, NodeId b) const {
  auto depth = [&](NodeId n) {
    std::size_t d = 0;
    while (nodes_[n].parent) {
      n = *nodes_[n].parent;
      ++d;
    }
    return d;
  };
  std::size_t da = depth(a), db = depth(b);
  while (da > db) {
    a = *nodes_[a].parent;
    --da;
  }
  while (db > da) {
    b = *nodes_[b].parent;
    --db;
  }
  while (a != b) {
    a = *nodes_[a].parent;
    b = *nodes_[b].parent;
  }
  return a;
}

std::vector<SymbolicSuffix> ClassificationTree::ancestors(NodeId n) const {
  std::vector<SymbolicSuffix> out;
  std::optional<NodeId> cur = n;
  while (cur) {
    if (nodes_[*cur].suffix) out.push_back(*nodes_[*cur].suffix);
    cur = nodes_[*cur].parent;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<NodeId> ClassificationTree::leaves() const {
  std::vector<NodeId> out;
  std::function<void(NodeId)> walk = [&](NodeId n) {
    if (nodes_[n].is_leaf()) {
      out.push_back(n);
      return;
    }
    for (NodeId c : nodes_[n].children) walk(c);
  };
  walk(root());
  return out;
}

std::vector<DataWord> ClassificationTree::short_prefixes(NodeId leaf) const {
  std::vector<DataWord> out;
  for (const auto& u : nodes_.at(leaf).prefixes) {
    if (is_short(u)) out.push_back(u);
  }
  return out;
}

NodeId ClassificationTree::leaf_of(const DataWord& u) const {
  auto it = leaf_of_.find(u);
  if (it == leaf_of_.end()) {
    throw std::out_of_range("prefix " + to_string(alphabet(), u) + " is not in U");
  }
  return it->second;
}

std::vector<int> ClassificationTree::memorable(const DataWord& u) {
  return ralearn::memorable(tq_, u, ancestors(u));
}

std::vector<Guard> ClassificationTree::initial_guards(const DataWord& u, ActionId alpha) {
  return ralearn::initial_guards(tq_, u, ancestors(u), alpha);
}

DataWord ClassificationTree::extension(const DataWord& u, ActionId alpha, const Guard& g) const {
  if (!alphabet().has_param(alpha)) return u.extended({alpha, std::nullopt});
  return u.extended({alpha, representative_value(u, g)});
}

bool ClassificationTree::accepting(NodeId leaf) {
  return tq_.query(nodes_.at(leaf).rep, SymbolicSuffix{}).accepting;
}

std::vector<SymbolicSuffix> ClassificationTree::suffixes() const {
  std::vector<SymbolicSuffix> out;
  for (const auto& n : nodes_) {
    if (n.suffix) out.push_back(*n.suffix);
  }
  return out;
}

std::string ClassificationTree::to_text() const {
  std::ostringstream out;
  std::function<void(NodeId, int)> walk = [&](NodeId n, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const CTNode& node = nodes_[n];
    if (!node.is_leaf()) {
      out << pad << "[" << to_string(alphabet(), *node.suffix) << "]\n";
      for (NodeId c : node.children) walk(c, depth + 1);
      return;
    }
    out << pad << "{";
    bool first = true;
    for (const auto& u : node.prefixes) {
      out << (first ? "" : ", ") << (is_short(u) ? "*" : "") << to_string(alphabet(), u);
      first = false;
    }
    out << "}\n";
  };
  walk(root(), 0);
  return out.str();
}

std::string ClassificationTree::to_dot() const {
  std::ostringstream out;
  out << "digraph CT {\n  node [fontname=\"monospace\"];\n";
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    const CTNode& node = nodes_[n];
    if (!node.is_leaf()) {
      out << "  n" << n << " [shape=box, label=\"" << to_string(alphabet(), *node.suffix)
          << "\"];\n";
    } else {
      out << "  n" << n << " [shape=plaintext, label=<";
      bool first = true;
      for (const auto& u : node.prefixes) {
        if (!first) out << "<br/>";
        const std::string text = to_string(alphabet(), u);
        out << (is_short(u) ? "<u>" + text + "</u>" : text);
        first = false;
      }
      out << ">];\n";
    }
    if (node.parent) out << "  n" << *node.parent << " -> n" << n << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ralearn
