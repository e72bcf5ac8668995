#pragma once

// The learner: closedness and consistency checks over the classification
// tree, hypothesis construction, counterexample analysis, and the main loop.
// Two modes share everything but counterexample handling: SL^λ grows S_p and
// U from counterexamples, SL^CT adds counterexample suffixes to the tree.

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ralearn/ct.hpp"
#include "ralearn/oracle.hpp"
#include "ralearn/restrict.hpp"

namespace ralearn {

/// A broken learner invariant; never a property of the SUL.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Algorithm { SLLambda, SLCT };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view text);

struct LearnerConfig {
  Algorithm algorithm = Algorithm::SLLambda;
  bool restrictions = true;
  std::size_t max_rounds = 10000;
  /// Receives one JSON object per event.
  std::function<void(const nlohmann::json&)> on_event;
};

enum class Check {
  LocationClosedness,
  TransitionClosedness,
  RegisterClosedness,
  LocationConsistency,
  TransitionConsistencyA,
  TransitionConsistencyB,
  RegisterConsistency,
};

std::string to_string(Check c);

struct Hypothesis {
  RegisterAutomaton automaton;
  std::vector<NodeId> leaf;           // per location
  std::vector<DataWord> access;       // per location: shortlex-least short prefix
};

struct LearnResult {
  RegisterAutomaton model;
  QueryStats stats;
  std::vector<std::size_t> hypothesis_locations;  // per equivalence query
  std::size_t rounds = 0;
  std::size_t max_counterexample_length = 0;
  std::map<std::string, std::size_t> fixes;  // check name -> count
  double learn_ms = 0;
  double test_ms = 0;
};

class Learner {
 public:
  Learner(const Alphabet& sigma, CountingOracle& mq, LearnerConfig cfg = {});

  /// Applies the first failing check's fix; returns which check fired.
  std::optional<Check> step();
  /// Applies fixes until all checks pass.
  void close();
  Hypothesis hypothesis();
  /// One pass of counterexample analysis. Throws InternalError when no
  /// index yields progress.
  void analyze(const DataWord& w);
  /// Full loop against the given equivalence oracle.
  LearnResult learn(EquivalenceOracle& eq);

  ClassificationTree& tree() { return *ct_; }
  TreeOracle& tree_oracle() { return tq_; }
  std::size_t round_count() const { return rounds_; }
  const std::map<std::string, std::size_t>& fix_counts() const { return fixes_; }

 private:
  bool location_closedness();
  bool transition_closedness();
  bool register_closedness();
  bool location_consistency();
  bool transition_consistency_a();
  bool transition_consistency_b();
  bool register_consistency();

  /// Refines the leaf of u by `restricted`; if `achieved` does not hold
  /// afterwards, refines again by `plain`. Throws if neither works.
  void refine_checked(const DataWord& u, const SymbolicSuffix& restricted,
                      const SymbolicSuffix& plain, const std::function<bool()>& achieved,
                      const char* check);
  bool separates(const DataWord& u, ActionId alpha, std::optional<DataValue> a,
                 std::optional<DataValue> b);
  std::size_t guard_index(const DataWord& u, ActionId alpha, std::optional<DataValue> d);
  /// Shortest suffix above t on which r's trees, read with t's values,
  /// disagree with t's.
  std::optional<SymbolicSuffix> identity_witness(const DataWord& t, const DataWord& r);
  /// After sifting t = u.alpha(d) for a new guard: if the tree cannot tell t
  /// from the prefix its current guard leads to, refine by the tail.
  void expose_guard(const DataWord& u, ActionId alpha, const DataWord& t,
                    const DataWord& cex_prefix, const DataWord& cex_tail);
  SymbolicSuffix from_counterexample(const DataWord& u, const DataWord& v) const;
  void emit(nlohmann::json event);
  void record(Check c, nlohmann::json detail);

  const Alphabet& sigma_;
  CountingOracle& mq_;
  LearnerConfig cfg_;
  TreeOracle tq_;
  std::unique_ptr<ClassificationTree> ct_;
  std::size_t rounds_ = 0;
  std::map<std::string, std::size_t> fixes_;
};

}  // namespace ralearn
