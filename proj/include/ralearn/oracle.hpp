#pragma once

// Membership oracle over a simulated SUL with query accounting, and the two
// equivalence oracles (exact product exploration, seeded random walks).

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>

#include <json.hpp>

#include "ralearn/automaton.hpp"

namespace ralearn {

enum class Phase { Learn, Test };

struct QueryStats {
  // Distinct words, attributed to the phase that first asked them.
  std::size_t learn_resets = 0;
  std::size_t test_resets = 0;
  // Every call, cache hits included.
  std::size_t learn_raw = 0;
  std::size_t test_raw = 0;
  std::size_t equivalence_queries = 0;
  std::size_t counterexamples = 0;
  // membership queries issued by one tree query -> number of tree queries
  std::map<std::size_t, std::size_t> tree_query_histogram;

  std::size_t total_resets() const { return learn_resets + test_resets; }
  std::size_t total_raw() const { return learn_raw + test_raw; }
};

nlohmann::json to_json(const QueryStats& s);

struct WordHash {
  std::size_t operator()(const DataWord& w) const noexcept;
};

class CountingOracle {
 public:
  explicit CountingOracle(const RegisterAutomaton& sul) : sul_(sul) {}

  bool member(const DataWord& w);
  /// Number of distinct words asked so far, across phases.
  std::size_t distinct() const { return memo_.size(); }

  void set_phase(Phase p) { phase_ = p; }
  Phase phase() const { return phase_; }
  QueryStats& stats() { return stats_; }
  const QueryStats& stats() const { return stats_; }
  const RegisterAutomaton& sul() const { return sul_; }

 private:
  const RegisterAutomaton& sul_;
  Phase phase_ = Phase::Learn;
  QueryStats stats_;
  std::unordered_map<DataWord, bool, WordHash> memo_;
};

class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  virtual std::optional<DataWord> find_counterexample(const RegisterAutomaton& hyp) = 0;
};

/// Shortest word on which the two automata disagree, or none.
std::optional<DataWord> find_counterexample_exact(const RegisterAutomaton& hyp,
                                                  const RegisterAutomaton& sul);

class ExactEquivalenceOracle : public EquivalenceOracle {
 public:
  explicit ExactEquivalenceOracle(const RegisterAutomaton& sul) : sul_(sul) {}
  std::optional<DataWord> find_counterexample(const RegisterAutomaton& hyp) override {
    return find_counterexample_exact(hyp, sul_);
  }

 private:
  const RegisterAutomaton& sul_;
};

struct RandomWalkConfig {
  std::size_t max_depth = 10;
  std::size_t walks = 10000;
  std::uint64_t seed = 0;
  double reuse_probability = 0.5;
};

/// Asks the SUL through the counting oracle in the test phase.
class RandomWalkOracle : public EquivalenceOracle {
 public:
  RandomWalkOracle(CountingOracle& mq, RandomWalkConfig cfg);
  std::optional<DataWord> find_counterexample(const RegisterAutomaton& hyp) override;

 private:
  CountingOracle& mq_;
  RandomWalkConfig cfg_;
  std::uint64_t round_ = 0;
};

}  // namespace ralearn
