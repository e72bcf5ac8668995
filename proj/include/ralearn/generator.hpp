#pragma once

// Seeded random register automata for scaling studies: a random DFA skeleton
// with some transitions replaced by store-then-compare gadgets.

#include <cstdint>

#include "ralearn/automaton.hpp"

namespace ralearn {

struct GeneratorConfig {
  std::size_t locations = 4;  // skeleton size; gadgets add one location each
  std::size_t actions = 2;
  double data_fraction = 0.0;  // share of skeleton transitions turned into gadgets
  std::uint64_t seed = 0;
  double missing_probability = 0.2;  // chance a (location, action) goes to the sink
  std::size_t max_retries = 100;
};

/// True iff no (location, action) pair has two transitions whose guards can
/// hold at once while leading to different locations.
bool is_determinate(const RegisterAutomaton& ra);

/// Throws std::runtime_error if no determinate automaton was produced within
/// max_retries attempts.
RegisterAutomaton generate_automaton(const GeneratorConfig& cfg);

}  // namespace ralearn
