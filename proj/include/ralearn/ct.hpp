#pragma once

// Classification tree over prefixes. Inner nodes carry a symbolic suffix,
// leaves a set of prefixes; every node has a representative prefix. The tree
// also owns the prefix set U, the short prefixes S_p, and the leaf map.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ralearn/sdt.hpp"

namespace ralearn {

struct ShortlexLess {
  bool operator()(const DataWord& a, const DataWord& b) const { return shortlex_less(a, b); }
};

using PrefixSet = std::set<DataWord, ShortlexLess>;
using NodeId = std::size_t;

struct CTNode {
  std::optional<SymbolicSuffix> suffix;  // set on inner nodes
  DataWord rep;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;  // creation order
  PrefixSet prefixes;            // leaves only

  bool is_leaf() const { return !suffix.has_value(); }
};

class ClassificationTree {
 public:
  /// Root labelled with the empty suffix; ε is sifted on construction.
  explicit ClassificationTree(TreeOracle& tq);

  NodeId root() const { return 0; }
  const CTNode& node(NodeId n) const { return nodes_.at(n); }
  std::size_t node_count() const { return nodes_.size(); }

  /// Inserts u into U below `from` (the root by default) and returns its leaf.
  NodeId sift(const DataWord& u, std::optional<NodeId> from = std::nullopt);
  /// Adds u to S_p and sifts one extension per initial guard and action.
  void expand(const DataWord& u);
  /// Turns `leaf` into an inner node labelled v and re-sifts its prefixes.
  void refine(NodeId leaf, const SymbolicSuffix& v);
  NodeId lca(NodeId a, NodeId b) const;

  /// Suffixes on the path from the root down to n, n included if inner.
  std::vector<SymbolicSuffix> ancestors(NodeId n) const;
  std::vector<SymbolicSuffix> ancestors(const DataWord& u) const {
    return ancestors(leaf_of(u));
  }
  /// Leaves in depth-first order, children in creation order.
  std::vector<NodeId> leaves() const;
  std::vector<DataWord> short_prefixes(NodeId leaf) const;

  NodeId leaf_of(const DataWord& u) const;
  bool in_U(const DataWord& u) const { return leaf_of_.count(u) != 0; }
  bool is_short(const DataWord& u) const { return short_.count(u) != 0; }
  const PrefixSet& U() const { return U_; }
  const PrefixSet& S_p() const { return short_; }
  std::size_t progress_measure() const { return U_.size() + short_.size(); }

  /// Memorable registers of u over the suffixes above its leaf.
  std::vector<int> memorable(const DataWord& u);
  std::vector<Guard> initial_guards(const DataWord& u, ActionId alpha);
  /// u . alpha(repr(u, g)).
  DataWord extension(const DataWord& u, ActionId alpha, const Guard& g) const;
  bool accepting(NodeId leaf);
  /// Every inner-node suffix.
  std::vector<SymbolicSuffix> suffixes() const;

  TreeOracle& tree_oracle() { return tq_; }
  const Alphabet& alphabet() const { return tq_.alphabet(); }

  std::string to_text() const;
  std::string to_dot() const;

 private:
  NodeId add_node(CTNode n);

  TreeOracle& tq_;
  std::vector<CTNode> nodes_;
  std::map<DataWord, NodeId> leaf_of_;
  PrefixSet U_;
  PrefixSet short_;
};

}  // namespace ralearn
