#pragma once

// Data words, alphabets and symbolic suffixes.
//
// Register and parameter indices are 1-based throughout: register x_i names
// the i-th data value of a word (arity-0 symbols carry no value and are not
// counted), parameter p_j names the j-th parameterized position of a suffix.

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ralearn/theory.hpp"

namespace ralearn {

using ActionId = std::size_t;

struct Action {
  std::string name;
  int arity = 1;  // 0 or 1

  bool operator==(const Action&) const = default;
};

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<Action> actions);

  std::size_t size() const { return actions_.size(); }
  const Action& operator[](ActionId id) const { return actions_.at(id); }
  bool has_param(ActionId id) const { return actions_.at(id).arity == 1; }
  std::optional<ActionId> find(std::string_view name) const;
  ActionId id_of(std::string_view name) const;
  const std::vector<Action>& actions() const { return actions_; }

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<Action> actions_;
};

struct DataSymbol {
  ActionId action = 0;
  std::optional<DataValue> value;

  auto operator<=>(const DataSymbol&) const = default;
};

class DataWord {
 public:
  DataWord() = default;
  explicit DataWord(std::vector<DataSymbol> symbols) : symbols_(std::move(symbols)) {}

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const DataSymbol& operator[](std::size_t i) const { return symbols_[i]; }
  const DataSymbol& back() const { return symbols_.back(); }
  const std::vector<DataSymbol>& symbols() const { return symbols_; }

  /// Data values of the arity-1 symbols, in order; index i-1 is register x_i.
  std::vector<DataValue> data_values() const;
  std::size_t data_count() const;

  /// First `n` symbols.
  DataWord prefix(std::size_t n) const;
  /// Symbols from index `from` (0-based) to the end.
  DataWord suffix_from(std::size_t from) const;
  /// Everything but the last symbol. Precondition: non-empty.
  DataWord parent() const { return prefix(size() - 1); }

  void reserve(std::size_t n) { symbols_.reserve(n); }
  DataWord& append(DataSymbol s) {
    symbols_.push_back(s);
    return *this;
  }
  DataWord extended(DataSymbol s) const {
    DataWord w = *this;
    w.append(s);
    return w;
  }
  DataWord concat(const DataWord& tail) const;

  auto operator<=>(const DataWord&) const = default;

 private:
  std::vector<DataSymbol> symbols_;
};

/// Length first, then lexicographic. The deterministic scan order of the learner.
bool shortlex_less(const DataWord& a, const DataWord& b);

/// Builds a word from (action name, value) pairs; value is ignored for arity 0.
DataWord make_word(const Alphabet& sigma,
                   std::initializer_list<std::pair<std::string_view, DataValue>> symbols);

/// Parses "push(0) pop(0)"; "ε" or the empty string is the empty word.
DataWord parse_word(const Alphabet& sigma, std::string_view text);
std::string to_string(const Alphabet& sigma, const DataWord& w);

struct ParamRestriction {
  enum class Kind { Unrestricted, Fresh, EqualsParam };
  Kind kind = Kind::Unrestricted;
  int target = 0;  // 1-based parameter index, EqualsParam only

  static ParamRestriction unrestricted() { return {}; }
  static ParamRestriction fresh() { return {Kind::Fresh, 0}; }
  static ParamRestriction equals(int j) { return {Kind::EqualsParam, j}; }

  bool is_unrestricted() const { return kind == Kind::Unrestricted; }
  bool is_fresh() const { return kind == Kind::Fresh; }
  bool is_equals() const { return kind == Kind::EqualsParam; }

  auto operator<=>(const ParamRestriction&) const = default;
};

/// Sequence of actions with formal parameters p1..pm (one per arity-1
/// position) and a restriction per parameter.
class SymbolicSuffix {
 public:
  SymbolicSuffix() = default;
  SymbolicSuffix(const Alphabet& sigma, std::vector<ActionId> actions);
  SymbolicSuffix(const Alphabet& sigma, std::vector<ActionId> actions,
                 std::vector<ParamRestriction> restrictions);

  std::size_t length() const { return actions_.size(); }
  bool empty() const { return actions_.empty(); }
  const std::vector<ActionId>& actions() const { return actions_; }
  std::size_t param_count() const { return restrictions_.size(); }
  /// 1-based.
  const ParamRestriction& restriction(int param) const { return restrictions_.at(param - 1); }
  const std::vector<ParamRestriction>& restrictions() const { return restrictions_; }
  bool has_param_at(std::size_t pos) const { return has_param_.at(pos); }
  std::size_t unrestricted_count() const;
  bool is_unrestricted() const { return unrestricted_count() == param_count(); }

  SymbolicSuffix without_restrictions() const;
  SymbolicSuffix with_restrictions(std::vector<ParamRestriction> restrictions) const;

  auto operator<=>(const SymbolicSuffix&) const = default;

 private:
  void check_restrictions() const;

  std::vector<ActionId> actions_;
  std::vector<bool> has_param_;
  std::vector<ParamRestriction> restrictions_;
};

/// Unrestricted suffix with the action sequence of `w`.
SymbolicSuffix actions_of(const Alphabet& sigma, const DataWord& w);
/// alpha(p1) . v with v's parameters shifted; all restrictions dropped.
SymbolicSuffix prepend(const Alphabet& sigma, ActionId alpha, const SymbolicSuffix& v);

/// All canonical instantiations of `v` after `prefix`, honoring restrictions.
/// Parameters are instantiated left to right over potential_values of
/// prefix . suffix-so-far. Returns the suffix words only.
std::vector<DataWord> instantiations(const Alphabet& sigma, const SymbolicSuffix& v,
                                     const DataWord& prefix);

/// e.g. "push(p1) pop(p2|=p1) push(p3|fresh)".
std::string to_string(const Alphabet& sigma, const SymbolicSuffix& v);

}  // namespace ralearn
