#pragma once

// Parameter restrictions for symbolic suffixes in the three contexts where
// the learner creates suffixes: counterexample tails, suffixes prepended to
// reveal registers, and suffixes separating two extensions.
//
// For the prepend and separating cases the result is a restriction of
// alpha . v where alpha's parameter (if any) is p1 and v's parameters shift
// by one.

#include <optional>
#include <vector>

#include "ralearn/sdt.hpp"

namespace ralearn {

SymbolicSuffix restrict_from_counterexample(const Alphabet& sigma, const DataWord& u,
                                            const DataWord& v);

/// `t` is the tree query for (u . alpha(d), v); `targets` are registers of u
/// that the new suffix should reveal at u. With `force_unrestricted_first`
/// alpha's parameter stays unrestricted regardless of d.
SymbolicSuffix restrict_prepend(const Alphabet& sigma, const DataWord& u, ActionId alpha,
                                std::optional<DataValue> d, const SymbolicSuffix& v,
                                const SDT& t, const std::vector<int>& targets,
                                bool force_unrestricted_first = false);

/// One side of a separating computation: the word u . alpha(d) and its tree.
struct Extension {
  DataWord prefix;  // u
  std::optional<DataValue> value;  // d
  const SDT* tree = nullptr;  // T(u . alpha(d), v)
};

struct SeparatingCandidate {
  std::size_t path = 0;        // index into paths(lhs tree)
  std::size_t other_path = 0;  // index into paths(rhs tree)
  SymbolicSuffix suffix;
};

/// Candidates for every differently labelled, jointly satisfiable path pair,
/// in canonical pair order.
std::vector<SeparatingCandidate> separating_candidates(const Alphabet& sigma, ActionId alpha,
                                                       const Extension& lhs,
                                                       const Extension& rhs,
                                                       const SymbolicSuffix& v);

/// Candidate with the fewest unrestricted parameters, earliest pair on ties.
/// Throws std::logic_error if no path pair separates.
SymbolicSuffix restrict_separating(const Alphabet& sigma, ActionId alpha, const Extension& lhs,
                                   const Extension& rhs, const SymbolicSuffix& v);

}  // namespace ralearn
