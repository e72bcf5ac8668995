#pragma once

// Symbolic decision trees and tree queries.
//
// An SDT for (u, v) has one level per parameter of v. Guards at level i
// constrain p_i against registers x_j of u or earlier parameters p_j.
// Children are canonical: equality branches sorted by reference, then one
// else branch whose excluded set is exactly those references. A node with a
// single True branch either had every equality branch merged into the fresh
// branch or belongs to a restricted parameter.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ralearn/automaton.hpp"
#include "ralearn/oracle.hpp"

namespace ralearn {

/// Register x_index of the prefix, or parameter p_index of the suffix.
struct Ref {
  bool is_param = false;
  int index = 0;

  static Ref x(int i) { return {false, i}; }
  static Ref p(int i) { return {true, i}; }

  auto operator<=>(const Ref&) const = default;
};

std::string to_string(const Ref& r);

struct SDTGuard {
  enum class Kind { True, Equal, Else };
  Kind kind = Kind::True;
  Ref ref;                    // Equal only
  std::vector<Ref> excluded;  // Else only, sorted

  static SDTGuard top() { return {}; }
  static SDTGuard equal(Ref r) { return {Kind::Equal, r, {}}; }
  static SDTGuard otherwise(std::vector<Ref> refs) { return {Kind::Else, {}, std::move(refs)}; }

  auto operator<=>(const SDTGuard&) const = default;
};

struct SDT {
  struct Branch;

  bool accepting = false;         // meaningful at leaves only
  std::vector<Branch> branches;   // empty at leaves

  bool is_leaf() const { return branches.empty(); }
  static SDT leaf(bool accepting) { return {accepting, {}}; }

  bool operator==(const SDT& other) const;
};

struct SDT::Branch {
  SDTGuard guard;
  SDT child;

  bool operator==(const Branch&) const = default;
};

inline bool SDT::operator==(const SDT& other) const {
  if (is_leaf() != other.is_leaf()) return false;
  if (is_leaf()) return accepting == other.accepting;
  return branches == other.branches;
}

/// One root-to-leaf path: a guard per level and the outcome.
struct SDTPath {
  std::vector<SDTGuard> guards;
  bool accepting = false;
};

std::vector<SDTPath> paths(const SDT& t);

/// Outcomes of all paths whose guards hold for the given register and
/// parameter values (1-based lookups). A canonical tree yields one outcome.
struct Evaluation {
  bool accept = false;
  bool reject = false;
};
Evaluation evaluate(const SDT& t, const std::vector<DataValue>& registers,
                    const std::vector<DataValue>& params, std::size_t level = 0);

/// Function view on a concrete suffix instantiation after prefix `u`.
bool classify(const SDT& t, const DataWord& u, const DataWord& suffix_instance);

/// Tree-query sessions with a cache keyed by (prefix, restricted suffix).
class TreeOracle {
 public:
  TreeOracle(const Alphabet& sigma, CountingOracle& mq) : sigma_(sigma), mq_(mq) {}

  const SDT& query(const DataWord& u, const SymbolicSuffix& v);
  bool cached(const DataWord& u, const SymbolicSuffix& v) const {
    return cache_.count({u, v}) != 0;
  }
  std::size_t size() const { return cache_.size(); }
  const Alphabet& alphabet() const { return sigma_; }
  CountingOracle& membership() { return mq_; }

 private:
  const Alphabet& sigma_;
  CountingOracle& mq_;
  std::map<std::pair<DataWord, SymbolicSuffix>, SDT> cache_;
};

/// Builds the canonical SDT for (u, v) by membership queries; uncached.
SDT tree_query(const Alphabet& sigma, CountingOracle& mq, const DataWord& u,
               const SymbolicSuffix& v);

/// Registers occurring in some guard, sorted.
std::vector<int> memorable(const SDT& t);

/// Union of memorable registers over the tree queries for u and each suffix.
std::vector<int> memorable(TreeOracle& tq, const DataWord& u,
                           const std::vector<SymbolicSuffix>& suffixes);

/// Partition of the next parameter after u for action alpha, from the root
/// guards of the tree queries for those `suffixes` that start with alpha.
/// Equality guards come first in register order, then the disequality guard.
std::vector<Guard> initial_guards(TreeOracle& tq, const DataWord& u,
                                  const std::vector<SymbolicSuffix>& suffixes, ActionId alpha);

/// Data value satisfying g after u.
DataValue representative_value(const DataWord& u, const Guard& g);

/// Register renaming, sorted by source register.
using Bijection = std::vector<std::pair<int, int>>;

Bijection identity_bijection(const std::vector<int>& regs);
Bijection inverse(const Bijection& g);
std::optional<int> image(const Bijection& g, int reg);

/// Renames registers in guards and re-canonicalizes. Throws on a register
/// outside the domain.
SDT apply_bijection(const Bijection& g, const SDT& t);

/// Renames registers in a transition guard; the parameter is left alone.
Guard apply_bijection(const Bijection& g, const Guard& guard);

/// Smallest bijection from memorable(u) to memorable(u') making all SDT pairs
/// over `suffixes` equal, or none.
std::optional<Bijection> find_bijection(TreeOracle& tq, const DataWord& u, const DataWord& u2,
                                        const std::vector<SymbolicSuffix>& suffixes);

/// All such bijections, in lexicographic order.
std::vector<Bijection> all_bijections(TreeOracle& tq, const DataWord& u, const DataWord& u2,
                                      const std::vector<SymbolicSuffix>& suffixes);

/// Indented text, one guard per line, leaves as + or -.
std::string to_text(const SDT& t);

}  // namespace ralearn
