#pragma once

// Register automata over the equality theory: the model format for systems
// under learning and the output type of the learner.
//
// A word with no enabled transition falls into an implicit rejecting sink
// that is never materialized.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ralearn/words.hpp"

namespace ralearn {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Either the transition parameter p or a register x_i.
struct Operand {
  bool is_param = true;
  int reg = 0;

  static Operand param() { return {true, 0}; }
  static Operand x(int i) { return {false, i}; }

  auto operator<=>(const Operand&) const = default;
};

std::string to_string(const Operand& o);
Operand parse_operand(std::string_view text);

struct GuardLiteral {
  Operand lhs;
  bool equal = true;
  Operand rhs;

  auto operator<=>(const GuardLiteral&) const = default;
};

/// Register index -> value, sorted by register index.
using Valuation = std::vector<std::pair<int, DataValue>>;

/// Conjunction of literals; empty means true.
struct Guard {
  std::vector<GuardLiteral> literals;

  bool is_true() const { return literals.empty(); }
  bool holds(const Valuation& mu, DataValue p) const;
  /// Satisfiability by enumerating valuations over a canonical domain.
  bool satisfiable() const;

  auto operator<=>(const Guard&) const = default;
};

std::string to_string(const Guard& g);

struct Assignment {
  std::vector<std::pair<int, Operand>> entries;  // target register := source

  auto operator<=>(const Assignment&) const = default;
};

std::string to_string(const Assignment& a);

struct Location {
  std::string name;
  std::vector<int> registers;  // sorted
  bool accepting = false;
};

struct Transition {
  std::size_t from = 0;
  ActionId action = 0;
  Guard guard;
  Assignment assignment;
  std::size_t to = 0;
};

struct RAState {
  std::size_t location = 0;
  Valuation valuation;

  auto operator<=>(const RAState&) const = default;
};

class RegisterAutomaton {
 public:
  /// Validates all structural invariants; throws ModelError.
  RegisterAutomaton(Alphabet alphabet, std::vector<Location> locations, std::size_t initial,
                    std::vector<Transition> transitions);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Location>& locations() const { return locations_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::size_t initial() const { return initial_; }
  std::size_t location_count() const { return locations_.size(); }
  std::size_t max_registers() const;
  std::size_t total_registers() const;
  std::size_t find_location(std::string_view name) const;

  RAState initial_state() const { return {initial_, {}}; }
  /// All successors over transitions whose guard holds; empty = sink.
  std::vector<RAState> step(const RAState& state, const DataSymbol& symbol) const;
  /// Successors over the first enabled transition in transition order only.
  std::vector<RAState> step_first(const RAState& state, const DataSymbol& symbol) const;
  /// Set of states reachable over `w` from the initial state.
  std::vector<RAState> run(const DataWord& w) const;
  bool accepting(const std::vector<RAState>& states) const;
  /// Some run over `w` ends in an accepting location.
  bool accepts(const DataWord& w) const;
  /// True if some word of the given runs has both accepting and rejecting runs.
  bool mixed(const std::vector<RAState>& states) const;

 private:
  void validate() const;
  RAState apply(const Transition& t, const RAState& s, const DataSymbol& symbol) const;

  Alphabet alphabet_;
  std::vector<Location> locations_;
  std::size_t initial_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::vector<std::size_t>>> outgoing_;  // [loc][action] -> transitions
};

RegisterAutomaton load_automaton(std::string_view json_text);
RegisterAutomaton load_automaton_file(const std::string& path);
std::string save_automaton(const RegisterAutomaton& ra);
std::string export_dot(const RegisterAutomaton& ra);

}  // namespace ralearn
