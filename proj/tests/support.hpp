#pragma once

// Shared fixtures and brute-force reference computations for the tests.
// Nothing here goes through the learner's own enumeration code.

#include <functional>
#include <string>
#include <vector>

#include "ralearn/learner.hpp"

namespace support {

using namespace ralearn;

inline RegisterAutomaton model(const std::string& name) {
  return load_automaton_file(std::string(RALEARN_MODELS_DIR) + "/" + name + ".json");
}

inline const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"stack2", "stack3", "fifo3", "fifo5",
                                              "fifo7",  "login-like", "fig7"};
  return names;
}

inline DataWord w(const Alphabet& sigma, std::string_view text) { return parse_word(sigma, text); }

inline SymbolicSuffix suffix(const Alphabet& sigma, std::initializer_list<std::string_view> acts,
                             std::vector<ParamRestriction> r = {}) {
  std::vector<ActionId> ids;
  for (auto a : acts) ids.push_back(sigma.id_of(a));
  SymbolicSuffix v(sigma, ids);
  return r.empty() ? v : v.with_restrictions(std::move(r));
}

/// Every data word over `acts` whose values, read left to right after
/// `context`, are either an earlier value or the least unused one.
inline void canonical_suffixes(const Alphabet& sigma, const std::vector<ActionId>& acts,
                               std::vector<DataValue> context,
                               const std::function<void(const DataWord&)>& visit) {
  std::function<void(std::size_t, DataWord&, std::vector<DataValue>&)> rec =
      [&](std::size_t i, DataWord& cur, std::vector<DataValue>& seen) {
        if (i == acts.size()) {
          visit(cur);
          return;
        }
        if (!sigma.has_param(acts[i])) {
          cur.append({acts[i], std::nullopt});
          rec(i + 1, cur, seen);
          cur = cur.prefix(cur.size() - 1);
          return;
        }
        std::vector<DataValue> options;
        for (DataValue v : seen) {
          if (std::find(options.begin(), options.end(), v) == options.end()) options.push_back(v);
        }
        DataValue fresh = 0;
        while (std::find(seen.begin(), seen.end(), fresh) != seen.end()) ++fresh;
        options.push_back(fresh);
        for (DataValue v : options) {
          cur.append({acts[i], v});
          seen.push_back(v);
          rec(i + 1, cur, seen);
          seen.pop_back();
          cur = cur.prefix(cur.size() - 1);
        }
      };
  DataWord cur;
  rec(0, cur, context);
}

/// All canonical words of exactly `len` symbols.
inline std::vector<DataWord> canonical_words(const Alphabet& sigma, std::size_t len) {
  std::vector<DataWord> out;
  std::function<void(std::vector<ActionId>&)> acts = [&](std::vector<ActionId>& a) {
    if (a.size() == len) {
      canonical_suffixes(sigma, a, {}, [&](const DataWord& x) { out.push_back(x); });
      return;
    }
    for (ActionId i = 0; i < sigma.size(); ++i) {
      a.push_back(i);
      acts(a);
      a.pop_back();
    }
  };
  std::vector<ActionId> a;
  acts(a);
  return out;
}

/// All action sequences of length <= n.
inline std::vector<std::vector<ActionId>> action_sequences(const Alphabet& sigma, std::size_t n) {
  std::vector<std::vector<ActionId>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == n) continue;
    for (ActionId a = 0; a < sigma.size(); ++a) {
      auto next = out[i];
      next.push_back(a);
      out.push_back(next);
    }
  }
  return out;
}

/// Register x_i is memorable for (u, actions) iff renaming every suffix
/// occurrence of u's i-th value to a brand-new value changes acceptance for
/// some canonical suffix. Only the last position carrying a value counts.
inline std::vector<int> brute_memorable(const RegisterAutomaton& sul, const DataWord& u,
                                        const std::vector<ActionId>& acts) {
  const auto values = u.data_values();
  std::vector<int> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool later = false;
    for (std::size_t j = i + 1; j < values.size(); ++j) later |= values[j] == values[i];
    if (later) continue;
    bool matters = false;
    DataValue fresh = 1000;
    canonical_suffixes(sul.alphabet(), acts, values, [&](const DataWord& s) {
      if (matters) return;
      std::vector<DataSymbol> renamed(s.symbols());
      bool touched = false;
      for (auto& sym : renamed) {
        if (sym.value && *sym.value == values[i]) {
          sym.value = fresh;
          touched = true;
        }
      }
      if (touched && sul.accepts(u.concat(s)) != sul.accepts(u.concat(DataWord(renamed)))) {
        matters = true;
      }
    });
    if (matters) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

struct RunLog {
  std::vector<nlohmann::json> events;
  std::size_t count(const std::string& event, const std::string& check = "") const {
    std::size_t n = 0;
    for (const auto& e : events) {
      if (e.at("event") == event && (check.empty() || e.value("check", "") == check)) ++n;
    }
    return n;
  }
};

/// Equivalence oracle that hands out a fixed list, then defers to exact.
class ScriptedOracle : public EquivalenceOracle {
 public:
  ScriptedOracle(const RegisterAutomaton& sul, std::vector<DataWord> script)
      : sul_(sul), script_(std::move(script)) {}
  std::optional<DataWord> find_counterexample(const RegisterAutomaton& hyp) override {
    while (next_ < script_.size()) {
      const DataWord& c = script_[next_++];
      if (hyp.accepts(c) != sul_.accepts(c)) return c;
    }
    return find_counterexample_exact(hyp, sul_);
  }

 private:
  const RegisterAutomaton& sul_;
  std::vector<DataWord> script_;
  std::size_t next_ = 0;
};

}  // namespace support
